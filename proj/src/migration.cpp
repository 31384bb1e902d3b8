#include "popabm/migration.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include "popabm/csv.hpp"
#include "popabm/errors.hpp"

namespace popabm {

double Matrix::total() const { return std::accumulate(data.begin(), data.end(), 0.0); }

MigrationTensor::MigrationTensor(std::vector<std::string> regions, int ages)
    : regions_(std::move(regions)), ages_(ages) {
  if (regions_.empty() || ages_ <= 0) throw InputError("migration tensor needs regions and ages");
  data_.assign(regions_.size() * regions_.size() * static_cast<std::size_t>(ages_), 0.0);
}

MigrationTensor MigrationTensor::ones_off_diagonal(std::vector<std::string> regions, int ages) {
  MigrationTensor t(std::move(regions), ages);
  for (std::size_t o = 0; o < t.region_count(); ++o)
    for (std::size_t d = 0; d < t.region_count(); ++d)
      if (o != d)
        for (int a = 0; a < ages; ++a) t.at(o, d, a) = 1.0;
  return t;
}

namespace {

// Region order of first appearance keeps files and tensors aligned.
std::size_t intern(std::vector<std::string>& regions, const std::string& code) {
  const auto it = std::find(regions.begin(), regions.end(), code);
  if (it != regions.end()) return static_cast<std::size_t>(it - regions.begin());
  regions.push_back(code);
  return regions.size() - 1;
}

}  // namespace

MigrationTensor MigrationTensor::read_csv(const std::filesystem::path& path) {
  const auto table = csv::Table::read(path);
  const auto c_o = table.column("origin");
  const auto c_d = table.column("destination");
  const auto c_a = table.column("age");
  const auto c_v = table.column("value");
  std::vector<std::string> regions;
  int ages = 0;
  for (const auto& row : table.rows()) {
    intern(regions, row.fields[c_o]);
    intern(regions, row.fields[c_d]);
    const auto a = table.integer(row, c_a);
    if (a < 0) throw InputError(table.where(row) + ": negative age");
    ages = std::max(ages, static_cast<int>(a) + 1);
  }
  MigrationTensor t(regions, ages);
  for (const auto& row : table.rows()) {
    const double v = table.number(row, c_v);
    if (v < 0.0) throw InputError(table.where(row) + ": negative migration weight");
    const auto o = intern(regions, row.fields[c_o]);
    const auto d = intern(regions, row.fields[c_d]);
    if (o == d && v != 0.0) throw InputError(table.where(row) + ": diagonal entries must be zero");
    t.at(o, d, static_cast<int>(table.integer(row, c_a))) = v;
  }
  return t;
}

void MigrationTensor::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "origin,destination,age,value\n";
  for (std::size_t o = 0; o < region_count(); ++o)
    for (std::size_t d = 0; d < region_count(); ++d)
      for (int a = 0; a < ages_; ++a)
        out << regions_[o] << ',' << regions_[d] << ',' << a << ',' << csv::format_number(at(o, d, a)) << '\n';
}

MarginalSet MigrationTensor::marginals() const {
  const std::size_t n = region_count();
  const auto na = static_cast<std::size_t>(ages_);
  MarginalSet m{regions_, ages_, Matrix(n, n), Matrix(n, na), Matrix(n, na)};
  for (std::size_t o = 0; o < n; ++o)
    for (std::size_t d = 0; d < n; ++d)
      for (int a = 0; a < ages_; ++a) {
        const double v = at(o, d, a);
        m.od(o, d) += v;
        m.emig_by_age(o, static_cast<std::size_t>(a)) += v;
        m.imm_by_age(d, static_cast<std::size_t>(a)) += v;
      }
  return m;
}

MarginalSet MarginalSet::read_csv(const std::filesystem::path& od_path,
                                  const std::filesystem::path& emig_path,
                                  const std::filesystem::path& imm_path) {
  const auto od = csv::Table::read(od_path);
  const auto em = csv::Table::read(emig_path);
  const auto im = csv::Table::read(imm_path);
  MarginalSet m;
  int ages = 0;
  for (const auto& row : od.rows()) {
    intern(m.regions, row.fields[od.column("origin")]);
    intern(m.regions, row.fields[od.column("destination")]);
  }
  for (const auto* t : {&em, &im}) {
    const auto c_r = t == &em ? t->column("origin") : t->column("destination");
    const auto c_a = t->column("age");
    for (const auto& row : t->rows()) {
      intern(m.regions, row.fields[c_r]);
      const auto a = t->integer(row, c_a);
      if (a < 0) throw InputError(t->where(row) + ": negative age");
      ages = std::max(ages, static_cast<int>(a) + 1);
    }
  }
  m.ages = ages;
  const std::size_t n = m.regions.size();
  const auto na = static_cast<std::size_t>(ages);
  m.od = Matrix(n, n);
  m.emig_by_age = Matrix(n, na);
  m.imm_by_age = Matrix(n, na);
  auto value = [](const csv::Table& t, const csv::Row& row) {
    const double v = t.number(row, t.column("value"));
    if (v < 0.0) throw InputError(t.where(row) + ": negative marginal");
    return v;
  };
  for (const auto& row : od.rows()) {
    m.od(intern(m.regions, row.fields[od.column("origin")]),
         intern(m.regions, row.fields[od.column("destination")])) = value(od, row);
  }
  for (const auto& row : em.rows()) {
    m.emig_by_age(intern(m.regions, row.fields[em.column("origin")]),
                  static_cast<std::size_t>(em.integer(row, em.column("age")))) = value(em, row);
  }
  for (const auto& row : im.rows()) {
    m.imm_by_age(intern(m.regions, row.fields[im.column("destination")]),
                 static_cast<std::size_t>(im.integer(row, im.column("age")))) = value(im, row);
  }
  return m;
}

void MarginalSet::write_csv(const std::filesystem::path& od_path, const std::filesystem::path& emig_path,
                            const std::filesystem::path& imm_path) const {
  std::ofstream od_out(od_path), em_out(emig_path), im_out(imm_path);
  if (!od_out || !em_out || !im_out) throw InputError("cannot write marginal files");
  od_out << "origin,destination,value\n";
  em_out << "origin,age,value\n";
  im_out << "destination,age,value\n";
  for (std::size_t o = 0; o < regions.size(); ++o) {
    for (std::size_t d = 0; d < regions.size(); ++d)
      od_out << regions[o] << ',' << regions[d] << ',' << csv::format_number(od(o, d)) << '\n';
    for (int a = 0; a < ages; ++a) {
      em_out << regions[o] << ',' << a << ',' << csv::format_number(emig_by_age(o, static_cast<std::size_t>(a))) << '\n';
      im_out << regions[o] << ',' << a << ',' << csv::format_number(imm_by_age(o, static_cast<std::size_t>(a))) << '\n';
    }
  }
}

DestinationModel::DestinationModel(const MigrationTensor& tensor, const RegionHierarchy& regions)
    : slot_of_region_(regions.size(), -1), ages_(tensor.ages()) {
  const std::size_t n = tensor.region_count();
  for (std::size_t i = 0; i < n; ++i) {
    const RegionId id = regions.id(tensor.regions()[i]);
    region_ids_.push_back(id);
    slot_of_region_[static_cast<std::size_t>(id)] = static_cast<int>(i);
  }
  probabilities_.assign(n * static_cast<std::size_t>(ages_) * n, 0.0);
  for (std::size_t o = 0; o < n; ++o) {
    for (int a = 0; a < ages_; ++a) {
      double sum = 0.0;
      for (std::size_t d = 0; d < n; ++d) sum += tensor.at(o, d, a);
      if (sum <= 0.0) continue;
      for (std::size_t d = 0; d < n; ++d) {
        probabilities_[(o * static_cast<std::size_t>(ages_) + static_cast<std::size_t>(a)) * n + d] =
            tensor.at(o, d, a) / sum;
      }
    }
  }
}

bool DestinationModel::covers(RegionId origin) const {
  return origin >= 0 && static_cast<std::size_t>(origin) < slot_of_region_.size() &&
         slot_of_region_[static_cast<std::size_t>(origin)] >= 0;
}

std::size_t DestinationModel::slot(RegionId origin) const {
  if (!covers(origin)) throw CoverageError("migration tensor does not cover region id " + std::to_string(origin));
  return static_cast<std::size_t>(slot_of_region_[static_cast<std::size_t>(origin)]);
}

std::span<const double> DestinationModel::distribution(RegionId origin, int age) const {
  const std::size_t n = region_ids_.size();
  const auto a = static_cast<std::size_t>(std::clamp(age, 0, ages_ - 1));
  return std::span<const double>(probabilities_).subspan((slot(origin) * static_cast<std::size_t>(ages_) + a) * n, n);
}

std::optional<RegionId> DestinationModel::draw(RegionId origin, int age, RandomStream& rng) const {
  const auto probs = distribution(origin, age);
  double u = rng.uniform();
  std::optional<RegionId> last;
  for (std::size_t d = 0; d < probs.size(); ++d) {
    if (probs[d] <= 0.0) continue;
    last = region_ids_[d];
    if (u < probs[d]) return last;
    u -= probs[d];
  }
  // Rounding can leave u just above the final cumulative weight.
  return last;
}

}  // namespace popabm
