#include "command.hpp"

#include "casimir/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace casimir::cli {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void append_json_value(std::vector<std::string> &out, const std::string &key, const json &v) {
  if (v.is_null())
    return;
  if (v.is_boolean()) {
    if (v.get<bool>())
      out.push_back("--" + key);
    return;
  }
  if (v.is_array()) {
    for (const auto &e : v)
      append_json_value(out, key, e);
    return;
  }
  out.push_back("--" + key);
  if (v.is_number_integer())
    out.push_back(std::to_string(v.get<std::int64_t>()));
  else if (v.is_number())
    out.push_back(format_double(v.get<double>()));
  else if (v.is_string())
    out.push_back(v.get<std::string>());
  else
    throw UsageError("config value for '" + key + "' must be a scalar or a list");
}

} // namespace

Command::Command(std::string name, std::string description) : app_(std::move(description), std::move(name)) {
  app_.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app_.set_help_flag("-h,--help", "Print this help message");
  // Listed for --help only; consumed before CLI11 sees the arguments.
  app_.add_option("--config", "Config file: flat key = value lines or a JSON record");
}

void Command::number(const std::string &key, double &target, const std::string &help,
                     bool required) {
  auto *opt = app_.add_option("--" + key, target, help);
  if (required)
    opt->required();
  else
    opt->capture_default_str();
  echo_.push_back([key, &target](json &j) { j[key] = target; });
}

void Command::optional_number(const std::string &key, std::optional<double> &target,
                              const std::string &help) {
  app_.add_option("--" + key, target, help);
  echo_.push_back([key, &target](json &j) {
    if (target)
      j[key] = *target;
  });
}

void Command::integer(const std::string &key, std::int64_t &target, const std::string &help) {
  app_.add_option("--" + key, target, help)->capture_default_str();
  echo_.push_back([key, &target](json &j) { j[key] = target; });
}

void Command::text(const std::string &key, std::string &target, const std::string &help,
                   bool required) {
  auto *opt = app_.add_option("--" + key, target, help);
  if (required)
    opt->required();
  else
    opt->capture_default_str();
  echo_.push_back([key, &target](json &j) { j[key] = target; });
}

void Command::optional_text(const std::string &key, std::optional<std::string> &target,
                            const std::string &help) {
  app_.add_option("--" + key, target, help);
  echo_.push_back([key, &target](json &j) {
    if (target)
      j[key] = *target;
  });
}

void Command::flag(const std::string &key, bool &target, const std::string &help) {
  app_.add_flag("--" + key, target, help);
  echo_.push_back([key, &target](json &j) { j[key] = target; });
}

void Command::texts(const std::string &key, std::vector<std::string> &target,
                    const std::string &help) {
  app_.add_option("--" + key, target, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  echo_.push_back([key, &target](json &j) {
    if (!target.empty())
      j[key] = target;
  });
}

void Command::output_path(const std::string &key, std::string &target, const std::string &help) {
  app_.add_option("--" + key, target, help);
}

void Command::positional(const std::string &key, std::string &target, const std::string &help) {
  app_.add_option(key + ",--" + key, target, help)->required();
  echo_.push_back([key, &target](json &j) { j[key] = target; });
}

void Command::common(double default_tol) {
  tol = default_tol;
  number("tol", tol, "Relative tolerance of the numerical routes");
  number("hbar-c", hbar_c, "Value of hbar*c used to scale reported energies");
  number("length-unit", length_unit, "Length unit; reported energies are scaled by hbar-c/length-unit");
  flag("diagnostics", diagnostics, "Include solver diagnostics in the record");
  app_.add_option("--workers", workers, "Worker threads (default: CASIMIR_WORKERS or 1)");
}

bool Command::parse(const std::vector<std::string> &args, std::ostream &out) {
  std::vector<std::string> from_config, rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string &a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size())
        throw UsageError("--config needs a path");
      const auto extra = config_arguments(args[++i]);
      from_config.insert(from_config.end(), extra.begin(), extra.end());
    } else if (a.rfind("--config=", 0) == 0) {
      const auto extra = config_arguments(a.substr(9));
      from_config.insert(from_config.end(), extra.begin(), extra.end());
    } else {
      rest.push_back(a);
    }
  }
  std::vector<std::string> all = from_config;
  all.insert(all.end(), rest.begin(), rest.end());
  std::vector<std::string> reversed(all.rbegin(), all.rend());
  try {
    app_.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app_.help();
    return false;
  } catch (const CLI::ParseError &e) {
    throw UsageError(e.what());
  }
  if (!(hbar_c > 0.0) || !(length_unit > 0.0) || !std::isfinite(hbar_c) || !std::isfinite(length_unit))
    throw UsageError("--hbar-c and --length-unit must be finite and positive");
  if (!(tol > 0.0) || !(tol < 1.0))
    throw UsageError("--tol must lie in (0, 1)");
  if (workers < 0)
    throw UsageError("--workers must be >= 0");
  return true;
}

json Command::inputs() const {
  json j = json::object();
  for (const auto &e : echo_)
    e(j);
  return j;
}

unsigned Command::worker_count() const {
  if (workers > 0)
    return static_cast<unsigned>(workers);
  if (const char *env = std::getenv("CASIMIR_WORKERS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return static_cast<unsigned>(v);
    throw UsageError("CASIMIR_WORKERS must be a positive integer");
  }
  return 1;
}

std::vector<double> parse_grid(const std::string &spec) {
  const std::string s = trim(spec);
  if (s.empty())
    throw UsageError("empty grid");
  std::vector<double> out;
  auto to_double = [&](const std::string &t) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(t, &pos);
      if (pos != t.size() || !std::isfinite(v))
        throw UsageError("bad grid value '" + t + "'");
      return v;
    } catch (const std::logic_error &) {
      throw UsageError("bad grid value '" + t + "'");
    }
  };
  if (s.rfind("log:", 0) == 0 || s.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(s.substr(4));
    for (std::string p; std::getline(ss, p, ':');)
      parts.push_back(trim(p));
    if (parts.size() != 3)
      throw UsageError("range grid needs start:stop:count");
    const double a = to_double(parts[0]), b = to_double(parts[1]);
    const double n = to_double(parts[2]);
    if (n < 1 || n != std::floor(n))
      throw UsageError("grid count must be a positive integer");
    const auto count = static_cast<std::size_t>(n);
    const bool log = s[1] == 'o';
    if (log && !(a > 0.0 && b > 0.0))
      throw UsageError("log grid needs positive end points");
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
    }
    if (count > 1)
      out.back() = b;
    return out;
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) {
    p = trim(p);
    if (p.empty())
      throw UsageError("empty entry in grid '" + s + "'");
    out.push_back(to_double(p));
  }
  return out;
}

std::vector<std::string> config_arguments(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error &e) {
      throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    const json &block = j.contains("inputs") ? j["inputs"] : j;
    if (!block.is_object())
      throw UsageError("config inputs must be an object");
    for (const auto &[key, value] : block.items())
      append_json_value(out, key, value);
    return out;
  }
  std::stringstream lines(text);
  int lineno = 0;
  for (std::string line; std::getline(lines, line);) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    if (value == "true") {
      out.push_back("--" + key);
    } else if (value != "false") {
      out.push_back("--" + key);
      out.push_back(value);
    }
  }
  return out;
}

json make_record(const std::string &command, const Command &cmd, json results, json diagnostics) {
  json record;
  record["schema_version"] = kSchemaVersion;
  record["command"] = command;
  record["inputs"] = cmd.inputs();
  record["results"] = std::move(results);
  record["diagnostics"] = cmd.diagnostics ? std::move(diagnostics) : json::object();
  return record;
}

void emit(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f)
    throw UsageError("cannot write '" + path + "'");
  f << text;
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace casimir::cli
