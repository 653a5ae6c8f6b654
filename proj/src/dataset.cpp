#include "imh/dataset.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "imh/rng.hpp"
#include "io_bytes.hpp"

namespace imh {

namespace {

std::uint32_t read_u32_be(std::istream& in, const char* field) {
  char b[4];
  bytes::read_exact(in, b, 4, field);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v = (v << 8) | static_cast<unsigned char>(b[i]);
  return v;
}

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
constexpr std::size_t kMaxRecordDim = 1u << 24;

std::string describe(const std::filesystem::path& p) { return p.string(); }

}  // namespace

FeatureMatrix load_idx(const std::filesystem::path& images,
                       const std::filesystem::path& labels) {
  auto img = bytes::open_input(images);
  const std::uint32_t img_magic = read_u32_be(img, "image magic");
  if (img_magic != kIdxImagesMagic) {
    std::ostringstream msg;
    msg << describe(images) << ": expected image magic 0x" << std::hex
        << kIdxImagesMagic << ", got 0x" << img_magic;
    throw FormatError(msg.str());
  }
  const std::uint32_t n = read_u32_be(img, "image count");
  const std::uint32_t rows = read_u32_be(img, "image rows");
  const std::uint32_t cols = read_u32_be(img, "image cols");
  if (n == 0 || rows == 0 || cols == 0)
    throw FormatError(describe(images) + ": zero dimension in header");
  const std::size_t d = static_cast<std::size_t>(rows) * cols;

  FeatureMatrix out;
  out.data = Matrix(n, d);
  std::vector<char> buf(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    bytes::read_exact(img, buf.data(), d, "image pixels");
    double* row = out.data.row(i);
    for (std::size_t j = 0; j < d; ++j)
      row[j] = static_cast<unsigned char>(buf[j]) / 255.0;
  }
  bytes::expect_eof(img, describe(images).c_str());

  auto lab = bytes::open_input(labels);
  const std::uint32_t lab_magic = read_u32_be(lab, "label magic");
  if (lab_magic != kIdxLabelsMagic) {
    std::ostringstream msg;
    msg << describe(labels) << ": expected label magic 0x" << std::hex
        << kIdxLabelsMagic << ", got 0x" << lab_magic;
    throw FormatError(msg.str());
  }
  const std::uint32_t ln = read_u32_be(lab, "label count");
  if (ln != n) {
    std::ostringstream msg;
    msg << describe(labels) << ": label count " << ln
        << " differs from image count " << n;
    throw FormatError(msg.str());
  }
  out.labels.resize(n);
  std::vector<char> lbuf(n);
  bytes::read_exact(lab, lbuf.data(), n, "label bytes");
  for (std::uint32_t i = 0; i < n; ++i)
    out.labels[i] = static_cast<unsigned char>(lbuf[i]);
  bytes::expect_eof(lab, describe(labels).c_str());

  out.validate();
  return out;
}

namespace {

template <class ReadValue>
FeatureMatrix load_vecs(const std::filesystem::path& path,
                        std::optional<std::size_t> limit, ReadValue read_value) {
  auto in = bytes::open_input(path);
  std::vector<double> values;
  std::size_t d = 0, n = 0;
  while (!(limit && n >= *limit)) {
    char head[4];
    in.read(head, 4);
    if (in.gcount() == 0) break;  // clean EOF between records
    if (in.gcount() != 4)
      throw FormatError(describe(path) + ": truncated record header");
    std::uint32_t rd = 0;
    for (int i = 0; i < 4; ++i)
      rd |= static_cast<std::uint32_t>(static_cast<unsigned char>(head[i]))
            << (8 * i);
    if (rd == 0 || rd > kMaxRecordDim) {
      std::ostringstream msg;
      msg << describe(path) << ": record " << n << " has implausible dimension "
          << rd;
      throw FormatError(msg.str());
    }
    if (n == 0) {
      d = rd;
    } else if (rd != d) {
      std::ostringstream msg;
      msg << describe(path) << ": record " << n << " has dimension " << rd
          << ", expected " << d;
      throw FormatError(msg.str());
    }
    for (std::size_t j = 0; j < d; ++j) values.push_back(read_value(in));
    ++n;
  }
  if (n == 0) throw FormatError(describe(path) + ": no records");

  FeatureMatrix out;
  out.data = Matrix(n, d);
  out.data.data() = std::move(values);
  out.validate();
  return out;
}

}  // namespace

FeatureMatrix load_fvecs(const std::filesystem::path& path,
                         std::optional<std::size_t> limit) {
  return load_vecs(path, limit, [](std::istream& in) {
    char b[4];
    bytes::read_exact(in, b, 4, "f32 values");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return static_cast<double>(std::bit_cast<float>(v));
  });
}

FeatureMatrix load_bvecs(const std::filesystem::path& path,
                         std::optional<std::size_t> limit) {
  return load_vecs(path, limit, [](std::istream& in) {
    char b;
    bytes::read_exact(in, &b, 1, "u8 values");
    return static_cast<double>(static_cast<unsigned char>(b));
  });
}

namespace {

double parse_double(std::string_view token, std::size_t line,
                    const std::filesystem::path& path) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    std::ostringstream msg;
    msg << describe(path) << ":" << line << ": cannot parse '" << token
        << "' as a number";
    throw FormatError(msg.str());
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

FeatureMatrix load_csv(const std::filesystem::path& path, bool has_labels) {
  auto in = bytes::open_input(path);
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty() || rest.front() == '#') continue;

    std::vector<double> fields;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view token = trim(rest.substr(0, comma));
      fields.push_back(parse_double(token, line_no, path));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }

    if (rows == 0) {
      cols = fields.size();
      if (has_labels && cols < 2) {
        std::ostringstream msg;
        msg << describe(path) << ":" << line_no
            << ": labelled rows need at least two columns";
        throw FormatError(msg.str());
      }
    } else if (fields.size() != cols) {
      std::ostringstream msg;
      msg << describe(path) << ":" << line_no << ": row has " << fields.size()
          << " columns, expected " << cols;
      throw FormatError(msg.str());
    }

    if (has_labels) {
      const double raw = fields.back();
      const int label = static_cast<int>(raw);
      if (raw != static_cast<double>(label) || label < 0) {
        std::ostringstream msg;
        msg << describe(path) << ":" << line_no << ": label '" << raw
            << "' is not a non-negative integer";
        throw FormatError(msg.str());
      }
      labels.push_back(label);
      fields.pop_back();
    }
    values.insert(values.end(), fields.begin(), fields.end());
    ++rows;
  }
  if (rows == 0) throw FormatError(describe(path) + ": no data rows");

  FeatureMatrix out;
  out.data = Matrix(rows, has_labels ? cols - 1 : cols);
  out.data.data() = std::move(values);
  out.labels = std::move(labels);
  out.validate();
  return out;
}

std::pair<FeatureMatrix, FeatureMatrix> split_train_test(
    const FeatureMatrix& all, std::size_t test_count, std::uint64_t seed) {
  const std::size_t n = all.size();
  if (test_count == 0 || test_count >= n)
    throw ArgumentError("split: test count must be in [1, n)");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = rng.uniform_below(i + 1);
    std::swap(order[i], order[j]);
  }

  auto take = [&](std::size_t begin, std::size_t end) {
    FeatureMatrix part;
    part.data = Matrix(end - begin, all.dim());
    if (all.has_labels()) part.labels.resize(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t src = order[i];
      std::copy_n(all.data.row(src), all.dim(), part.data.row(i - begin));
      if (all.has_labels()) part.labels[i - begin] = all.labels[src];
    }
    return part;
  };

  return {take(test_count, n), take(0, test_count)};
}

}  // namespace imh
