#include "matmi/field_file.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "matmi/errors.hpp"

namespace matmi {

namespace {

constexpr char kMagic[8] = {'M', 'A', 'T', 'M', 'I', 'F', 'L', 'D'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& is, const std::string& path, const char* what) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError(path + ": truncated while reading " + what);
  return v;
}

void write_header(std::ostream& os, const FieldFileHeader& h) {
  os.write(kMagic, 8);
  put(os, h.version);
  put(os, static_cast<std::uint8_t>(h.domain));
  if (h.domain == DomainKind::UnitSquare) {
    put(os, h.n);
  } else {
    put(os, h.disk_center.x());
    put(os, h.disk_center.y());
    put(os, h.disk_radius);
    put(os, h.disk_level);
  }
  put(os, static_cast<std::uint8_t>(h.kind));
  put(os, static_cast<std::uint8_t>(h.rep));
  put(os, h.count);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv_twin(const std::string& path, const Mesh& mesh, FieldKind kind, FieldRep rep,
                    const Eigen::VectorXd& payload) {
  std::ofstream os(path + ".csv");
  if (!os) throw IoError(path + ".csv: cannot open for writing");
  const int ncomp = kind == FieldKind::Scalar ? 1 : (kind == FieldKind::Vector ? 2 : 3);
  os << "x1,x2";
  if (ncomp == 1)
    os << ",value";
  else if (ncomp == 2)
    os << ",v1,v2";
  else
    os << ",d11,d12,d22";
  os << "\n";
  const bool nodal = rep == FieldRep::Nodal;
  const int rows = nodal ? mesh.vertex_count() : mesh.triangle_count();
  for (int i = 0; i < rows; ++i) {
    const Vec2 x = nodal ? mesh.vertices[i] : mesh.centroids[i];
    os << fmt17(x.x()) << ',' << fmt17(x.y());
    for (int c = 0; c < ncomp; ++c) os << ',' << fmt17(payload[i * ncomp + c]);
    os << "\n";
  }
}

void write_field(const std::string& path, const Mesh& mesh, FieldKind kind, FieldRep rep,
                 const Eigen::VectorXd& payload, bool csv_twin) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");
  FieldFileHeader h = header_for(mesh, kind, rep, static_cast<std::uint64_t>(payload.size()));
  write_header(os, h);
  os.write(reinterpret_cast<const char*>(payload.data()),
           static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!os) throw IoError(path + ": write failed");
  os.close();
  if (csv_twin && rep != FieldRep::NodalPlusElement)
    write_csv_twin(path, mesh, kind, rep, payload);
}

}  // namespace

FieldFileHeader header_for(const Mesh& mesh, FieldKind kind, FieldRep rep,
                           std::uint64_t count) {
  FieldFileHeader h;
  h.domain = mesh.domain;
  h.n = static_cast<std::uint32_t>(mesh.n_cells);
  h.disk_center = mesh.disk_center;
  h.disk_radius = mesh.disk_radius;
  h.disk_level = static_cast<std::uint32_t>(mesh.disk_level);
  h.kind = kind;
  h.rep = rep;
  h.count = count;
  return h;
}

Mesh mesh_from_header(const FieldFileHeader& h) {
  if (h.domain == DomainKind::UnitSquare)
    return build_unit_square_mesh(static_cast<int>(h.n));
  return build_disk_mesh(h.disk_center, h.disk_radius, static_cast<int>(h.disk_level));
}

bool header_matches(const FieldFileHeader& h, const Mesh& mesh) {
  if (h.domain != mesh.domain) return false;
  if (h.domain == DomainKind::UnitSquare) return static_cast<int>(h.n) == mesh.n_cells;
  return static_cast<int>(h.disk_level) == mesh.disk_level &&
         h.disk_radius == mesh.disk_radius && h.disk_center == mesh.disk_center;
}

void write_scalar_field(const std::string& path, const ScalarField& f, bool csv_twin) {
  write_field(path, f.mesh(), FieldKind::Scalar, FieldRep::Nodal, f.values(), csv_twin);
}

void write_tensor_field(const std::string& path, const TensorField& f, bool csv_twin) {
  const int n = f.mesh().vertex_count();
  Eigen::VectorXd payload(3 * n);
  for (int i = 0; i < n; ++i) {
    payload[3 * i] = f.d11()[i];
    payload[3 * i + 1] = f.d12()[i];
    payload[3 * i + 2] = f.d22()[i];
  }
  write_field(path, f.mesh(), FieldKind::Tensor, FieldRep::Nodal, payload, csv_twin);
}

void write_vector_field(const std::string& path, const VectorField& f, bool csv_twin) {
  const Mesh& mesh = f.mesh();
  if (f.rep() == VectorRep::NodalPlusElement) {
    const int n = mesh.vertex_count(), t = mesh.triangle_count();
    Eigen::VectorXd payload(2 * (n + t));
    for (int i = 0; i < n; ++i) {
      payload[2 * i] = f.nodal_values()(i, 0);
      payload[2 * i + 1] = f.nodal_values()(i, 1);
    }
    for (int e = 0; e < t; ++e) {
      payload[2 * n + 2 * e] = f.element_values()(e, 0);
      payload[2 * n + 2 * e + 1] = f.element_values()(e, 1);
    }
    write_field(path, mesh, FieldKind::Vector, FieldRep::NodalPlusElement, payload, csv_twin);
    return;
  }
  const bool nodal = f.rep() == VectorRep::Nodal;
  const auto& vals = nodal ? f.nodal_values() : f.element_values();
  Eigen::VectorXd payload(2 * vals.rows());
  for (int i = 0; i < vals.rows(); ++i) {
    payload[2 * i] = vals(i, 0);
    payload[2 * i + 1] = vals(i, 1);
  }
  write_field(path, mesh, FieldKind::Vector, nodal ? FieldRep::Nodal : FieldRep::Element,
              payload, csv_twin);
}

LoadedField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path + ": cannot open");
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw IoError(path + ": bad magic");
  LoadedField f;
  f.header.version = take<std::uint32_t>(is, path, "version");
  if (f.header.version != 1)
    throw IoError(path + ": unsupported format version " + std::to_string(f.header.version));
  const auto dom = take<std::uint8_t>(is, path, "domain kind");
  if (dom > 1) throw IoError(path + ": unknown domain kind");
  f.header.domain = static_cast<DomainKind>(dom);
  if (f.header.domain == DomainKind::UnitSquare) {
    f.header.n = take<std::uint32_t>(is, path, "mesh size");
  } else {
    f.header.disk_center.x() = take<double>(is, path, "disk center");
    f.header.disk_center.y() = take<double>(is, path, "disk center");
    f.header.disk_radius = take<double>(is, path, "disk radius");
    f.header.disk_level = take<std::uint32_t>(is, path, "disk level");
  }
  const auto kind = take<std::uint8_t>(is, path, "field kind");
  if (kind > 2) throw IoError(path + ": unknown field kind");
  f.header.kind = static_cast<FieldKind>(kind);
  const auto rep = take<std::uint8_t>(is, path, "representation");
  if (rep > 2) throw IoError(path + ": unknown representation");
  f.header.rep = static_cast<FieldRep>(rep);
  f.header.count = take<std::uint64_t>(is, path, "payload count");
  if (f.header.count > (1ull << 32)) throw IoError(path + ": payload count implausibly large");
  f.payload.resize(static_cast<Eigen::Index>(f.header.count));
  is.read(reinterpret_cast<char*>(f.payload.data()),
          static_cast<std::streamsize>(f.header.count * sizeof(double)));
  if (!is) throw IoError(path + ": truncated payload");
  return f;
}

ScalarField LoadedField::as_scalar(const Mesh& mesh) const {
  if (header.kind != FieldKind::Scalar) throw IoError("field is not scalar");
  if (!header_matches(header, mesh)) throw IoError("field mesh descriptor mismatch");
  if (static_cast<int>(header.count) != mesh.vertex_count())
    throw IoError("scalar payload length mismatch");
  return ScalarField(mesh, payload);
}

TensorField LoadedField::as_tensor(const Mesh& mesh) const {
  if (header.kind != FieldKind::Tensor) throw IoError("field is not tensor");
  if (!header_matches(header, mesh)) throw IoError("field mesh descriptor mismatch");
  const int n = mesh.vertex_count();
  if (static_cast<int>(header.count) != 3 * n) throw IoError("tensor payload length mismatch");
  Eigen::VectorXd a(n), b(n), c(n);
  for (int i = 0; i < n; ++i) {
    a[i] = payload[3 * i];
    b[i] = payload[3 * i + 1];
    c[i] = payload[3 * i + 2];
  }
  return TensorField(mesh, std::move(a), std::move(b), std::move(c));
}

VectorField LoadedField::as_vector(const Mesh& mesh) const {
  if (header.kind != FieldKind::Vector) throw IoError("field is not vector");
  if (!header_matches(header, mesh)) throw IoError("field mesh descriptor mismatch");
  const int n = mesh.vertex_count(), t = mesh.triangle_count();
  auto unpack = [this](int offset, int rows) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> m(rows, 2);
    for (int i = 0; i < rows; ++i) {
      m(i, 0) = payload[offset + 2 * i];
      m(i, 1) = payload[offset + 2 * i + 1];
    }
    return m;
  };
  switch (header.rep) {
    case FieldRep::Nodal:
      if (static_cast<int>(header.count) != 2 * n) throw IoError("vector payload mismatch");
      return VectorField::nodal(mesh, unpack(0, n));
    case FieldRep::Element:
      if (static_cast<int>(header.count) != 2 * t) throw IoError("vector payload mismatch");
      return VectorField::element(mesh, unpack(0, t));
    default:
      if (static_cast<int>(header.count) != 2 * (n + t))
        throw IoError("vector payload mismatch");
      return VectorField::nodal_plus_element(mesh, unpack(0, n), unpack(2 * n, t));
  }
}

// ---- Manifest ----

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void Manifest::set_double(const std::string& key, double value) { set(key, fmt17(value)); }

void Manifest::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

std::optional<std::string> Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string Manifest::get_or(const std::string& key, const std::string& fallback) const {
  auto v = get(key);
  return v ? *v : fallback;
}

double Manifest::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  return v ? std::stod(*v) : fallback;
}

long long Manifest::get_int(const std::string& key, long long fallback) const {
  auto v = get(key);
  return v ? std::stoll(*v) : fallback;
}

void Manifest::write(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  for (const auto& [k, v] : entries_) os << k << " = " << v << "\n";
  if (!os) throw IoError(path + ": write failed");
}

Manifest Manifest::read(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path + ": cannot open");
  Manifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw IoError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    m.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return m;
}

// ---- IterationLog CSV ----

void write_iteration_log(const std::string& path, const IterationLog& log) {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "k,rel_error,residual,ratio,wall_time_s\n";
  for (const auto& r : log.records)
    os << r.k << ',' << fmt17(r.error) << ',' << fmt17(r.residual) << ',' << fmt17(r.ratio)
       << ',' << fmt17(r.wall_time_s) << "\n";
}

std::vector<IterationRecord> read_iteration_log(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path + ": cannot open");
  std::vector<IterationRecord> out;
  std::string line;
  if (!std::getline(is, line)) throw IoError(path + ": empty iteration log");
  if (line.rfind("k,", 0) != 0) throw IoError(path + ": missing iteration log header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    IterationRecord r;
    std::stringstream ss(line);
    std::string tok;
    try {
      std::getline(ss, tok, ',');
      r.k = std::stoi(tok);
      std::getline(ss, tok, ',');
      r.error = std::stod(tok);
      std::getline(ss, tok, ',');
      r.residual = std::stod(tok);
      std::getline(ss, tok, ',');
      r.ratio = std::stod(tok);
      std::getline(ss, tok, ',');
      r.wall_time_s = std::stod(tok);
    } catch (const std::exception&) {
      throw IoError(path + ": malformed iteration log line: " + line);
    }
    out.push_back(r);
  }
  if (out.empty()) throw IoError(path + ": iteration log has no records");
  return out;
}

}  // namespace matmi
