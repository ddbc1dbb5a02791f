#include "cntfield/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "cntfield/config.hpp"
#include "cntfield/errors.hpp"

namespace cntfield {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string shape_name(DomainShape s) { return s == DomainShape::Annulus ? "annulus" : "square_ring"; }

std::string geometry_body(const Domain& d) {
  std::ostringstream out;
  out << "domain " << shape_name(d.shape) << "\n";
  out << "aspect " << fmt(d.aspect) << "\n";
  out << "inner_half_side " << fmt(d.inner_half_side) << "\n";
  out << "alpha " << fmt(d.alpha.real()) << " " << fmt(d.alpha.imag()) << "\n";
  out << "m " << d.cnts.size() << "\n";
  for (const auto& s : d.cnts)
    out << "cnt " << fmt(s.center.real()) << " " << fmt(s.center.imag()) << " " << fmt(s.length) << " "
        << fmt(s.angle) << "\n";
  return out.str();
}

double parse_number(const std::string& token, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(where + ": '" + token + "' is not a finite number");
  }
}

// Little-endian primitives.
void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}
void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}
void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw IoError("field binary: truncated file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}
std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("field binary: truncated file");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

constexpr char kFieldMagic[8] = {'C', 'N', 'T', 'F', 'G', 'R', 'D', '1'};

std::uint64_t parse_hex(const std::string& s) {
  if (s.empty()) return 0;
  return std::stoull(s, nullptr, 16);
}

json vec_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

std::string geometry_hash(const Domain& domain) { return hex64(fnv1a64(geometry_body(domain))); }

void write_geometry(const GeometryRecord& r, std::ostream& out) {
  out << "# cntfield geometry\n";
  out << "format cntfield-geometry 1\n";
  out << "seed " << r.seed << "\n";
  out << "config_hash " << (r.config_hash.empty() ? "-" : r.config_hash) << "\n";
  out << geometry_body(r.domain);
  out << "geometry_hash " << geometry_hash(r.domain) << "\n";
}

GeometryRecord read_geometry(std::istream& in) {
  GeometryRecord r;
  r.domain.cnts.clear();
  std::string line, stored_hash;
  long declared_m = -1;
  int number = 0;
  bool have_format = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    const std::string where = "geometry line " + std::to_string(number);
    auto need = [&](std::size_t count) {
      if (tok.size() != count)
        throw InvalidInput(where + ": '" + key + "' expects " + std::to_string(count) + " values");
    };
    if (key == "format") {
      need(2);
      if (tok[0] != "cntfield-geometry" || tok[1] != "1") throw InvalidInput(where + ": unsupported format");
      have_format = true;
    } else if (key == "seed") {
      need(1);
      try {
        r.seed = std::stoull(tok[0]);
      } catch (const std::exception&) {
        throw InvalidInput(where + ": bad seed '" + tok[0] + "'");
      }
    } else if (key == "config_hash") {
      need(1);
      r.config_hash = tok[0] == "-" ? "" : tok[0];
    } else if (key == "domain") {
      need(1);
      if (tok[0] == "square_ring")
        r.domain.shape = DomainShape::SquareRing;
      else if (tok[0] == "annulus")
        r.domain.shape = DomainShape::Annulus;
      else
        throw InvalidInput(where + ": unknown domain '" + tok[0] + "'");
    } else if (key == "aspect") {
      need(1);
      r.domain.aspect = parse_number(tok[0], where);
      if (!(r.domain.aspect > 0) || r.domain.aspect > 1) throw InvalidInput(where + ": aspect must lie in (0, 1]");
    } else if (key == "inner_half_side") {
      need(1);
      r.domain.inner_half_side = parse_number(tok[0], where);
      if (r.domain.inner_half_side < 0 || r.domain.inner_half_side >= 1)
        throw InvalidInput(where + ": inner_half_side must lie in [0, 1)");
    } else if (key == "alpha") {
      need(2);
      r.domain.alpha = {parse_number(tok[0], where), parse_number(tok[1], where)};
    } else if (key == "m") {
      need(1);
      declared_m = static_cast<long>(parse_number(tok[0], where));
    } else if (key == "cnt") {
      const std::string rec = "CNT record " + std::to_string(r.domain.cnts.size() + 1) + " (" + where + ")";
      if (tok.size() != 4) throw InvalidInput(rec + ": expected cx cy length angle");
      const double cx = parse_number(tok[0], rec), cy = parse_number(tok[1], rec);
      const double len = parse_number(tok[2], rec), ang = parse_number(tok[3], rec);
      if (std::abs(cx) >= 1 || std::abs(cy) >= 1) throw InvalidInput(rec + ": center outside the outer square");
      if (!(len > 0) || len >= 2) throw InvalidInput(rec + ": length must lie in (0, 2)");
      r.domain.cnts.emplace_back(Complex(cx, cy), len, ang);
    } else if (key == "geometry_hash") {
      need(1);
      stored_hash = tok[0];
    } else {
      throw InvalidInput(where + ": unknown record '" + key + "'");
    }
  }
  if (!have_format) throw InvalidInput("geometry file: missing format line");
  if (declared_m != static_cast<long>(r.domain.cnts.size()))
    throw InvalidInput("geometry file: m = " + std::to_string(declared_m) + " but " +
                       std::to_string(r.domain.cnts.size()) + " CNT records present");
  if (!stored_hash.empty() && stored_hash != geometry_hash(r.domain))
    throw InvalidInput("geometry file: geometry_hash does not match the records");
  if (!r.domain.contains(r.domain.alpha)) throw InvalidInput("geometry file: alpha is not inside the domain");
  return r;
}

void write_solution(const SolutionRecord& r, std::ostream& out) {
  const auto& s = r.solution;
  const auto& d = r.geometry.domain;
  json j;
  j["format"] = "cntfield-solution";
  j["version"] = 1;
  j["seed"] = r.geometry.seed;
  j["config_hash"] = r.geometry.config_hash;
  j["geometry_hash"] = geometry_hash(d);
  json cnts = json::array();
  for (const auto& c : d.cnts) cnts.push_back({c.center.real(), c.center.imag(), c.length, c.angle});
  j["geometry"] = {{"domain", shape_name(d.shape)},
                   {"aspect", d.aspect},
                   {"inner_half_side", d.inner_half_side},
                   {"alpha", {d.alpha.real(), d.alpha.imag()}},
                   {"cnts", cnts}};
  j["n"] = r.n;
  j["upsample"] = r.upsample;
  j["corner_window"] = s.corner_window;
  j["c"] = s.c;
  j["cnt_count"] = s.cnt_count;
  j["delta"] = vec_json(s.delta);
  j["h_piecewise"] = vec_json(s.h_piecewise);
  j["h_flatness"] = vec_json(s.h_flatness);
  j["gmres"] = {{"iterations", s.report.iterations},
                {"converged", s.report.converged},
                {"final_residual", s.report.final_residual},
                {"residual_history", s.report.residual_history}};
  j["mu"] = vec_json(s.mu);
  j["f_re"] = vec_json(s.f_boundary.real());
  j["f_im"] = vec_json(s.f_boundary.imag());
  out << j.dump(1) << "\n";
}

SolutionRecord read_solution(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("solution file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "cntfield-solution" || j.at("version") != 1)
      throw InvalidInput("solution file: unsupported format");
    SolutionRecord r;
    r.geometry.seed = j.at("seed").get<std::uint64_t>();
    r.geometry.config_hash = j.at("config_hash").get<std::string>();
    const auto& g = j.at("geometry");
    auto& d = r.geometry.domain;
    d.shape = g.at("domain") == "annulus" ? DomainShape::Annulus : DomainShape::SquareRing;
    d.aspect = g.at("aspect").get<double>();
    d.inner_half_side = g.at("inner_half_side").get<double>();
    d.alpha = {g.at("alpha").at(0).get<double>(), g.at("alpha").at(1).get<double>()};
    d.cnts.clear();
    for (const auto& c : g.at("cnts"))
      d.cnts.emplace_back(Complex(c.at(0).get<double>(), c.at(1).get<double>()), c.at(2).get<double>(),
                          c.at(3).get<double>());
    if (geometry_hash(d) != j.at("geometry_hash").get<std::string>())
      throw InvalidInput("solution file: geometry_hash does not match the stored geometry");
    r.n = j.at("n").get<Index>();
    r.upsample = j.at("upsample").get<int>();
    auto& s = r.solution;
    s.alpha = d.alpha;
    s.corner_window = j.at("corner_window").get<Index>();
    s.c = j.at("c").get<double>();
    s.cnt_count = j.at("cnt_count").get<Index>();
    s.delta = json_vec(j.at("delta"));
    s.h_piecewise = json_vec(j.at("h_piecewise"));
    s.h_flatness = json_vec(j.at("h_flatness"));
    const auto& gm = j.at("gmres");
    s.report.iterations = gm.at("iterations").get<int>();
    s.report.converged = gm.at("converged").get<bool>();
    s.report.final_residual = gm.at("final_residual").get<double>();
    s.report.residual_history = gm.at("residual_history").get<std::vector<double>>();
    s.mu = json_vec(j.at("mu"));
    const Vector re = json_vec(j.at("f_re")), im = json_vec(j.at("f_im"));
    if (re.size() != im.size() || re.size() != s.mu.size())
      throw InvalidInput("solution file: boundary arrays differ in length");
    s.f_boundary.resize(re.size());
    for (Index i = 0; i < re.size(); ++i) s.f_boundary[i] = {re[i], im[i]};
    const Index components = static_cast<Index>(d.cnts.size()) + (d.inner_half_side > 0 ? 2 : 1);
    if (s.f_boundary.size() != components * r.n)
      throw InvalidInput("solution file: boundary data does not match n and the geometry");
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("solution file: ") + e.what());
  }
}

void write_field_csv(const FieldGrid& grid, const FieldHeader& header, std::ostream& out, const BandGrid* bands) {
  out << "# cntfield field grid\n";
  out << "# config_hash " << (header.config_hash.empty() ? "-" : header.config_hash) << "\n";
  out << "# seed " << header.seed << "\n";
  out << "# nx " << grid.nx << " ny " << grid.ny << " bbox " << fmt(grid.bbox.xmin) << " " << fmt(grid.bbox.xmax)
      << " " << fmt(grid.bbox.ymin) << " " << fmt(grid.bbox.ymax) << "\n";
  out << "# mask: 0 ring, 1 inclusion, 2 hole, 3 outside, 4 near boundary\n";
  out << "x,y,mask,U,Re_q,Im_q" << (bands ? ",band" : "") << "\n";
  for (Index iy = 0; iy < grid.ny; ++iy) {
    for (Index ix = 0; ix < grid.nx; ++ix) {
      const auto c = static_cast<std::size_t>(grid.index(ix, iy));
      const Complex z = grid.point(ix, iy);
      out << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << int(grid.mask[c]) << ',';
      if (grid.mask[c] == CellMask::Ring)
        out << fmt(grid.U[c]) << ',' << fmt(grid.q[c].real()) << ',' << fmt(grid.q[c].imag());
      else
        out << "nan,nan,nan";
      if (bands) out << ',' << bands->band[c];
      out << '\n';
    }
  }
}

void write_field_binary(const FieldGrid& grid, const FieldHeader& header, std::ostream& out) {
  out.write(kFieldMagic, 8);
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(grid.nx));
  put_u32(out, static_cast<std::uint32_t>(grid.ny));
  put_u32(out, 0);
  put_f64(out, grid.bbox.xmin);
  put_f64(out, grid.bbox.xmax);
  put_f64(out, grid.bbox.ymin);
  put_f64(out, grid.bbox.ymax);
  put_u64(out, header.seed);
  put_u64(out, parse_hex(header.config_hash));
  for (auto m : grid.mask) out.put(static_cast<char>(m));
  for (double u : grid.U) put_f64(out, u);
  for (const auto& q : grid.q) {
    put_f64(out, q.real());
    put_f64(out, q.imag());
  }
  for (double d : grid.distance) put_f64(out, d);
}

FieldGrid read_field_binary(std::istream& in, FieldHeader* header) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kFieldMagic, 8) != 0) throw IoError("field binary: bad magic");
  if (get_u32(in) != 1) throw IoError("field binary: unsupported version");
  FieldGrid g;
  g.nx = get_u32(in);
  g.ny = get_u32(in);
  get_u32(in);
  g.bbox.xmin = get_f64(in);
  g.bbox.xmax = get_f64(in);
  g.bbox.ymin = get_f64(in);
  g.bbox.ymax = get_f64(in);
  const std::uint64_t seed = get_u64(in);
  const std::uint64_t hash = get_u64(in);
  if (header) {
    header->seed = seed;
    header->config_hash = hash ? hex64(hash) : "";
  }
  const auto cells = static_cast<std::size_t>(g.nx * g.ny);
  g.mask.resize(cells);
  for (auto& m : g.mask) {
    const int c = in.get();
    if (c < 0 || c > 4) throw IoError("field binary: bad mask byte");
    m = static_cast<CellMask>(c);
  }
  g.U.resize(cells);
  for (auto& u : g.U) u = get_f64(in);
  g.q.resize(cells);
  for (auto& q : g.q) {
    const double re = get_f64(in);
    q = {re, get_f64(in)};
  }
  g.distance.resize(cells);
  for (auto& d : g.distance) d = get_f64(in);
  return g;
}

void save_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cntfield
