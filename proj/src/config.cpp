#include "cntfield/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "cntfield/errors.hpp"

namespace cntfield {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw InvalidInput("config key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw InvalidInput("config key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw InvalidInput("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return x;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_unsigned(k, v); }},
      {"domain",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "square_ring")
           c.domain = DomainShape::SquareRing;
         else if (v == "annulus")
           c.domain = DomainShape::Annulus;
         else
           throw InvalidInput("config key '" + k + "': expected square_ring or annulus, got '" + v + "'");
       }},
      {"m", [](RunConfig& c, const std::string& k, const std::string& v) { c.m = static_cast<int>(to_integer(k, v)); }},
      {"length_law",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto parts = split(v, ':');
         if (parts.size() == 2 && parts[0] == "fixed") {
           c.length_law = LengthLaw::fixed(to_double(k, parts[1]));
         } else if (parts.size() == 3 && parts[0] == "uniform") {
           c.length_law = LengthLaw::uniform(to_double(k, parts[1]), to_double(k, parts[2]));
         } else {
           throw InvalidInput("config key '" + k + "': expected fixed:L or uniform:Lmin:Lmax, got '" + v + "'");
         }
       }},
      {"inner_half_side", [](RunConfig& c, const std::string& k, const std::string& v) { c.inner_half_side = to_double(k, v); }},
      {"aspect", [](RunConfig& c, const std::string& k, const std::string& v) { c.aspect = to_double(k, v); }},
      {"n", [](RunConfig& c, const std::string& k, const std::string& v) { c.n = to_integer(k, v); }},
      {"gmres_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.gmres_tol = to_double(k, v); }},
      {"gmres_maxit", [](RunConfig& c, const std::string& k, const std::string& v) { c.gmres_maxit = static_cast<int>(to_integer(k, v)); }},
      {"separation", [](RunConfig& c, const std::string& k, const std::string& v) { c.separation = to_double(k, v); }},
      {"clearance", [](RunConfig& c, const std::string& k, const std::string& v) { c.clearance = to_double(k, v); }},
      {"upsample", [](RunConfig& c, const std::string& k, const std::string& v) { c.upsample = static_cast<int>(to_integer(k, v)); }},
      {"bbox",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto parts = split(v, ',');
         if (parts.size() != 4) throw InvalidInput("config key '" + k + "': expected xmin,xmax,ymin,ymax");
         c.bbox = {to_double(k, parts[0]), to_double(k, parts[1]), to_double(k, parts[2]), to_double(k, parts[3])};
       }},
      {"nx", [](RunConfig& c, const std::string& k, const std::string& v) { c.nx = to_integer(k, v); }},
      {"ny", [](RunConfig& c, const std::string& k, const std::string& v) { c.ny = to_integer(k, v); }},
      {"outputs",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.outputs.clear();
         for (auto& s : split(v, ','))
           if (!s.empty()) c.outputs.push_back(s);
       }},
      {"probe_points",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.probe_points.clear();
         for (auto& p : split(v, ';')) {
           if (p.empty()) continue;
           const auto xy = split(p, ':');
           if (xy.size() != 2) throw InvalidInput("config key '" + k + "': expected x:y;x:y;...");
           c.probe_points.emplace_back(to_double(k, xy[0]), to_double(k, xy[1]));
         }
       }},
      {"threads", [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = static_cast<int>(to_integer(k, v)); }},
      {"contour_levels", [](RunConfig& c, const std::string& k, const std::string& v) { c.contour_levels = static_cast<int>(to_integer(k, v)); }},
      {"standoff", [](RunConfig& c, const std::string& k, const std::string& v) { c.standoff = to_double(k, v); }},
      {"guard", [](RunConfig& c, const std::string& k, const std::string& v) { c.guard = to_double(k, v); }},
      {"output_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"prefix", [](RunConfig& c, const std::string&, const std::string& v) { c.prefix = v; }},
  };
  return table;
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw InvalidInput("unknown config key '" + key + "'");
  it->second(c, key, value);
}

const std::vector<std::string> kKnownOutputs = {"geometry", "solution", "field_csv", "field_bin",
                                                 "phase_ppm", "contour_ppm", "bands_csv", "report"};

}  // namespace

bool RunConfig::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("config line " + std::to_string(number) + ": expected key = value");
    try {
      set_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const InvalidInput& e) {
      throw InvalidInput("config line " + std::to_string(number) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw InvalidInput("override '" + o + "' is not key=value");
    set_key(config, trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw InvalidInput("invalid configuration: " + what); };
  if (c.m < 0) fail("m must be non-negative");
  if (c.domain == DomainShape::Annulus && c.m != 0) fail("the annulus domain carries no nanotubes (m must be 0)");
  if (!(c.length_law.min > 0) || c.length_law.max < c.length_law.min || c.length_law.max >= 2)
    fail("length_law needs 0 < min <= max < 2");
  if (c.inner_half_side < 0 || c.inner_half_side >= 1) fail("inner_half_side must lie in [0, 1)");
  if (!(c.aspect > 0) || c.aspect > 1) fail("aspect must lie in (0, 1]");
  if (c.n < 8 || c.n % 2 != 0) fail("n must be even and at least 8");
  if (!(c.gmres_tol > 0)) fail("gmres_tol must be positive");
  if (c.gmres_maxit < 1) fail("gmres_maxit must be at least 1");
  if (c.separation < 0 || c.clearance < 0) fail("separation and clearance must be non-negative");
  if (c.upsample < 1) fail("upsample must be at least 1");
  if (!(c.bbox.xmax > c.bbox.xmin) || !(c.bbox.ymax > c.bbox.ymin)) fail("bbox must be non-empty");
  if (c.nx < 1 || c.ny < 1) fail("nx and ny must be positive");
  if (c.threads < 0) fail("threads must be non-negative");
  if (c.contour_levels < 2) fail("contour_levels must be at least 2");
  if (c.standoff < 0 || c.guard < 0) fail("standoff and guard must be non-negative");
  for (const auto& o : c.outputs)
    if (std::find(kKnownOutputs.begin(), kKnownOutputs.end(), o) == kKnownOutputs.end()) fail("unknown output '" + o + "'");
  if (c.prefix.empty()) fail("prefix must not be empty");
}

std::string canonical_text(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  kv["seed"] = std::to_string(c.seed);
  kv["domain"] = c.domain == DomainShape::Annulus ? "annulus" : "square_ring";
  kv["m"] = std::to_string(c.m);
  kv["length_law"] = c.length_law.kind == LengthLaw::Kind::Fixed
                         ? "fixed:" + fmt(c.length_law.min)
                         : "uniform:" + fmt(c.length_law.min) + ":" + fmt(c.length_law.max);
  kv["inner_half_side"] = fmt(c.inner_half_side);
  kv["aspect"] = fmt(c.aspect);
  kv["n"] = std::to_string(c.n);
  kv["gmres_tol"] = fmt(c.gmres_tol);
  kv["gmres_maxit"] = std::to_string(c.gmres_maxit);
  kv["separation"] = fmt(c.separation);
  kv["clearance"] = fmt(c.clearance);
  kv["upsample"] = std::to_string(c.upsample);
  kv["bbox"] = fmt(c.bbox.xmin) + "," + fmt(c.bbox.xmax) + "," + fmt(c.bbox.ymin) + "," + fmt(c.bbox.ymax);
  kv["nx"] = std::to_string(c.nx);
  kv["ny"] = std::to_string(c.ny);
  std::string probes;
  for (const auto& p : c.probe_points) probes += (probes.empty() ? "" : ";") + fmt(p.real()) + ":" + fmt(p.imag());
  kv["probe_points"] = probes;
  kv["contour_levels"] = std::to_string(c.contour_levels);
  kv["standoff"] = fmt(c.standoff);
  kv["guard"] = fmt(c.guard);
  // threads, outputs, output_dir and prefix do not change any number.
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string config_hash(const RunConfig& config) { return hex64(fnv1a64(canonical_text(config))); }

}  // namespace cntfield
