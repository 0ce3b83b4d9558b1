#include "augward/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "augward/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

namespace augward {

namespace {

constexpr char kMagic[8] = {'A', 'W', 'C', 'K', 'P', 'T', '0', '1'};

void put_i32(std::ostream& out, int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

int32_t get_i32(std::istream& in, const std::string& path) {
  int32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), 4)) throw DataError("truncated checkpoint " + path);
  return v;
}

}  // namespace

void save_checkpoint(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path);
  out.write(kMagic, sizeof kMagic);
  put_i32(out, model.encoder.in_dim);
  put_i32(out, model.encoder.hidden);
  put_i32(out, model.encoder.layers);
  put_i32(out, model.classifier.num_classes);
  const auto params = model.parameters();
  put_i32(out, static_cast<int32_t>(params.size()));
  for (const Param* p : params) {
    put_i32(out, static_cast<int32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put_i32(out, p->rows);
    put_i32(out, p->cols);
  }
  for (const Param* p : params)
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  if (!out) throw DataError("failed writing checkpoint " + path);
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw DataError(path + " is not an augward checkpoint");
  const int in_dim = get_i32(in, path);
  const int hidden = get_i32(in, path);
  const int layers = get_i32(in, path);
  const int num_classes = get_i32(in, path);
  Model model = Model::init(in_dim, hidden, layers, num_classes, 0);
  auto params = model.parameters();
  const int count = get_i32(in, path);
  if (count != static_cast<int>(params.size()))
    throw DataError(path + ": parameter count " + std::to_string(count) + " does not match " +
                    std::to_string(params.size()));
  for (Param* p : params) {
    const int name_len = get_i32(in, path);
    std::string name(static_cast<size_t>(name_len), '\0');
    if (!in.read(name.data(), name_len)) throw DataError("truncated checkpoint " + path);
    const int rows = get_i32(in, path), cols = get_i32(in, path);
    if (name != p->name || rows != p->rows || cols != p->cols)
      throw DataError(path + ": tensor '" + name + "' " + shape_str(rows, cols) +
                      " does not match expected '" + p->name + "' " +
                      shape_str(p->rows, p->cols));
  }
  for (Param* p : params)
    if (!in.read(reinterpret_cast<char*>(p->value.data()),
                 static_cast<std::streamsize>(p->value.size() * sizeof(double))))
      throw DataError("truncated checkpoint " + path);
  return model;
}

}  // namespace augward
