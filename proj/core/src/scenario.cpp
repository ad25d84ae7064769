#include "fogcap/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace fogcap {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw ScenarioParseError(os.str());
}

double parse_double(const std::string& s, const std::string& origin,
                    int line) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) fail(origin, line, "expected a number");
  return v;
}

std::int64_t parse_int(const std::string& s, const std::string& origin,
                       int line) {
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) fail(origin, line, "expected an integer");
  return v;
}

bool parse_bool(const std::string& s, const std::string& origin, int line) {
  if (s == "true") return true;
  if (s == "false") return false;
  fail(origin, line, "expected true or false");
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

bool valid_scheme(const std::string& s) {
  return s == "proposed" || s == "priority-only" || s == "scaling-only" ||
         s == "baseline" || s == "all";
}

} // namespace

Scenario Scenario::parse(const std::string& text, const std::string& origin) {
  Scenario sc;
  using Setter = std::function<void(Scenario&, const std::string&, int)>;
  auto dbl = [&](double Scenario::* field) {
    return Setter([field, &origin](Scenario& s, const std::string& v, int ln) {
      s.*field = parse_double(v, origin, ln);
    });
  };
  auto intf = [&](int Scenario::* field) {
    return Setter([field, &origin](Scenario& s, const std::string& v, int ln) {
      const std::int64_t x = parse_int(v, origin, ln);
      if (x < std::numeric_limits<int>::min() ||
          x > std::numeric_limits<int>::max())
        fail(origin, ln, "integer out of range");
      s.*field = static_cast<int>(x);
    });
  };

  const std::map<std::string, Setter> setters = {
      {"mu", dbl(&Scenario::mu)},
      {"alpha", dbl(&Scenario::alpha)},
      {"beta", dbl(&Scenario::beta)},
      {"m_init", intf(&Scenario::m_init)},
      {"m_max", intf(&Scenario::m_max)},
      {"m_min", intf(&Scenario::m_min)},
      {"pool_size", intf(&Scenario::pool_size)},
      {"w1_threshold", dbl(&Scenario::w1_threshold)},
      {"w_sct_threshold", dbl(&Scenario::w_sct_threshold)},
      {"lambda_min", dbl(&Scenario::lambda_min)},
      {"lambda_max", dbl(&Scenario::lambda_max)},
      {"lambda_step", dbl(&Scenario::lambda_step)},
      {"carry_state",
       [&origin](Scenario& s, const std::string& v, int ln) {
         s.carry_state = parse_bool(v, origin, ln);
       }},
      {"scheme",
       [&origin](Scenario& s, const std::string& v, int ln) {
         if (!valid_scheme(v)) fail(origin, ln, "unknown scheme '" + v + "'");
         s.scheme = v;
       }},
      {"lambda",
       [&origin](Scenario& s, const std::string& v, int ln) {
         s.lambda = parse_double(v, origin, ln);
       }},
      {"seed",
       [&origin](Scenario& s, const std::string& v, int ln) {
         std::uint64_t x = 0;
         const char* end = v.data() + v.size();
         auto [p, ec] = std::from_chars(v.data(), end, x);
         if (ec != std::errc{} || p != end)
           fail(origin, ln, "expected an unsigned integer");
         s.seed = x;
       }},
      {"replications", intf(&Scenario::replications)},
      {"horizon_tasks",
       [&origin](Scenario& s, const std::string& v, int ln) {
         s.horizon_tasks = parse_int(v, origin, ln);
       }},
      {"warmup_fraction", dbl(&Scenario::warmup_fraction)},
      {"device_rates",
       [&origin](Scenario& s, const std::string& v, int ln) {
         s.device_rates.clear();
         std::string item;
         std::istringstream items(v);
         while (std::getline(items, item, ',')) {
           item = trim(item);
           if (item.empty()) fail(origin, ln, "empty entry in rate list");
           s.device_rates.push_back(parse_double(item, origin, ln));
         }
         if (s.device_rates.empty()) fail(origin, ln, "empty rate list");
       }},
      {"cloud_offload_rate", dbl(&Scenario::cloud_offload_rate)},
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      fail(origin, line_no, "unknown key '" + key + "'");
    if (const auto [prev, fresh] = seen.emplace(key, line_no); !fresh)
      fail(origin, line_no,
           "duplicate key '" + key + "' (first on line " +
               std::to_string(prev->second) + ")");
    if (value.empty()) fail(origin, line_no, "missing value");
    it->second(sc, value, line_no);
  }
  sc.validate();
  return sc;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioParseError("cannot open scenario file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::string Scenario::serialize(const std::vector<std::string>& header) const {
  std::ostringstream os;
  for (const std::string& h : header) os << "# " << h << "\n";
  os << "mu = " << format_double(mu) << "\n";
  os << "alpha = " << format_double(alpha) << "\n";
  os << "beta = " << format_double(beta) << "\n";
  os << "m_init = " << m_init << "\n";
  os << "m_max = " << m_max << "\n";
  os << "m_min = " << m_min << "\n";
  os << "pool_size = " << pool_size << "\n";
  os << "w1_threshold = " << format_double(w1_threshold) << "\n";
  os << "w_sct_threshold = " << format_double(w_sct_threshold) << "\n";
  os << "lambda_min = " << format_double(lambda_min) << "\n";
  os << "lambda_max = " << format_double(lambda_max) << "\n";
  os << "lambda_step = " << format_double(lambda_step) << "\n";
  os << "carry_state = " << (carry_state ? "true" : "false") << "\n";
  os << "scheme = " << scheme << "\n";
  if (lambda) os << "lambda = " << format_double(*lambda) << "\n";
  os << "seed = " << seed << "\n";
  os << "replications = " << replications << "\n";
  os << "horizon_tasks = " << horizon_tasks << "\n";
  os << "warmup_fraction = " << format_double(warmup_fraction) << "\n";
  if (!device_rates.empty()) {
    os << "device_rates = ";
    for (std::size_t i = 0; i < device_rates.size(); ++i)
      os << (i ? ", " : "") << format_double(device_rates[i]);
    os << "\n";
  }
  os << "cloud_offload_rate = " << format_double(cloud_offload_rate) << "\n";
  return os.str();
}

void Scenario::save(const std::filesystem::path& path,
                    const std::vector<std::string>& header) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize(header);
}

void Scenario::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  require(std::isfinite(mu) && mu > 0.0, "mu must be > 0");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be >= 0");
  require(alpha + beta <= 1.0, "alpha + beta must not exceed 1");
  require(m_min >= 1, "m_min must be >= 1");
  require(m_min <= m_init && m_init <= m_max,
          "need m_min <= m_init <= m_max");
  require(pool_size >= m_init, "pool_size must cover m_init nodes");
  require(w1_threshold > 0.0, "w1_threshold must be > 0");
  require(w_sct_threshold > 0.0, "w_sct_threshold must be > 0");
  require(std::isfinite(lambda_min) && lambda_min > 0.0,
          "lambda_min must be > 0");
  require(lambda_max >= lambda_min, "lambda_max must be >= lambda_min");
  require(std::isfinite(lambda_step) && lambda_step > 0.0,
          "lambda_step must be > 0");
  if (lambda) require(std::isfinite(*lambda) && *lambda > 0.0,
                      "lambda must be > 0");
  require(replications >= 2, "replications must be >= 2");
  require(horizon_tasks >= 1, "horizon_tasks must be >= 1");
  require(warmup_fraction >= 0.0 && warmup_fraction < 1.0,
          "warmup_fraction must be in [0, 1)");
  double total = 0.0;
  for (double r : device_rates) {
    require(std::isfinite(r) && r >= 0.0, "device rates must be >= 0");
    total += r;
  }
  require(std::isfinite(cloud_offload_rate) && cloud_offload_rate >= 0.0,
          "cloud_offload_rate must be >= 0");
  require(cloud_offload_rate <= total,
          "cloud_offload_rate exceeds the total device rate");
  require(valid_scheme(scheme), "unknown scheme");
}

std::vector<double> Scenario::lambda_grid() const {
  const auto count = static_cast<std::size_t>(
      std::floor((lambda_max - lambda_min) / lambda_step + 1e-9));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    grid[i] = lambda_min + static_cast<double>(i) * lambda_step;
  return grid;
}

} // namespace fogcap
