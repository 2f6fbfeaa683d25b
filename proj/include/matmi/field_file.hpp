#ifndef MATMI_FIELD_FILE_HPP
#define MATMI_FIELD_FILE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matmi/fields.hpp"
#include "matmi/reconstruct.hpp"

namespace matmi {

// Binary field container. Layout (little-endian):
//   magic "MATMIFLD" | u32 version | u8 domain | domain params
//   | u8 field kind | u8 representation | u64 count | count f64 payload
// Unit-square params: u32 n. Disk params: f64 cx, cy, radius; u32 level.
// An optional CSV twin (<path>.csv) mirrors the payload with coordinates,
// printed to 17 significant digits.
enum class FieldKind : std::uint8_t { Scalar = 0, Vector = 1, Tensor = 2 };
enum class FieldRep : std::uint8_t { Nodal = 0, Element = 1, NodalPlusElement = 2 };

struct FieldFileHeader {
  std::uint32_t version = 1;
  DomainKind domain = DomainKind::UnitSquare;
  std::uint32_t n = 0;  // unit square cells per direction
  Vec2 disk_center{0, 0};
  double disk_radius = 0;
  std::uint32_t disk_level = 0;
  FieldKind kind = FieldKind::Scalar;
  FieldRep rep = FieldRep::Nodal;
  std::uint64_t count = 0;
};

FieldFileHeader header_for(const Mesh& mesh, FieldKind kind, FieldRep rep, std::uint64_t count);
Mesh mesh_from_header(const FieldFileHeader& h);
bool header_matches(const FieldFileHeader& h, const Mesh& mesh);

void write_scalar_field(const std::string& path, const ScalarField& f, bool csv_twin = false);
void write_tensor_field(const std::string& path, const TensorField& f, bool csv_twin = false);
void write_vector_field(const std::string& path, const VectorField& f, bool csv_twin = false);

struct LoadedField {
  FieldFileHeader header;
  Eigen::VectorXd payload;

  ScalarField as_scalar(const Mesh& mesh) const;
  TensorField as_tensor(const Mesh& mesh) const;
  VectorField as_vector(const Mesh& mesh) const;
};

LoadedField read_field(const std::string& path);

// Flat "key = value" manifest with '#' comments; insertion order preserved.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool has(const std::string& key) const { return get(key).has_value(); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void write(const std::string& path) const;
  static Manifest read(const std::string& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Iteration log CSV: header k,rel_error,residual,ratio,wall_time_s.
void write_iteration_log(const std::string& path, const IterationLog& log);
std::vector<IterationRecord> read_iteration_log(const std::string& path);

}  // namespace matmi

#endif
