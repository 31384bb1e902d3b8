#include "popabm/config.hpp"

#include <fstream>
#include <sstream>

#include "popabm/csv.hpp"
#include "popabm/errors.hpp"

namespace popabm {

KeyValues KeyValues::parse(std::istream& in, const std::string& source) {
  KeyValues kv;
  kv.source_ = source;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    const auto body = csv::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(source + ":" + std::to_string(n) + ": expected key = value");
    }
    const std::string key(csv::trim(body.substr(0, eq)));
    const std::string value(csv::trim(body.substr(eq + 1)));
    if (key.empty()) throw InputError(source + ":" + std::to_string(n) + ": empty key");
    if (!kv.values_.emplace(key, value).second) {
      throw InputError(source + ":" + std::to_string(n) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

KeyValues KeyValues::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse(in, path.string());
}

const std::string& KeyValues::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InputError(source_ + ": missing key '" + key + "'");
  used_[key] = true;
  return it->second;
}

std::string KeyValues::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double KeyValues::number(const std::string& key) const {
  const auto& v = get(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InputError(source_ + ": '" + key + "' is not a number: " + v);
  }
}

std::int64_t KeyValues::integer(const std::string& key) const {
  const auto& v = get(key);
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw InputError(source_ + ": '" + key + "' is not an integer: " + v);
  }
}

std::vector<std::string> KeyValues::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

InternalMigrationMode parse_im_mode(const std::string& text) {
  if (text == "none") return InternalMigrationMode::None;
  if (text == "full-regional") return InternalMigrationMode::FullRegional;
  throw InputError("im_mode must be none or full-regional, got '" + text + "'");
}

std::string im_mode_name(InternalMigrationMode mode) {
  return mode == InternalMigrationMode::None ? "none" : "full-regional";
}

RunConfig RunConfig::parse(std::istream& in, const std::string& source, std::filesystem::path base_dir) {
  const auto kv = KeyValues::parse(in, source);
  RunConfig c;
  c.base_dir = std::move(base_dir);
  c.start = Date::parse(kv.get("start"));
  c.end = Date::parse(kv.get("end"));
  c.step = MacroStep::parse(kv.get_or("step", "1y"));
  if (kv.has("seed")) c.seed = static_cast<std::uint64_t>(kv.integer("seed"));
  if (kv.has("runs")) c.runs = static_cast<int>(kv.integer("runs"));
  if (kv.has("workers")) c.workers = static_cast<int>(kv.integer("workers"));
  c.im_mode = parse_im_mode(kv.get_or("im_mode", "none"));
  if (kv.has("max_age")) c.max_age = static_cast<int>(kv.integer("max_age"));
  if (kv.has("male_fraction")) c.male_fraction = kv.number("male_fraction");
  c.regions = kv.get("regions");
  c.params = kv.get("params");
  c.population = kv.get_or("population", "");
  c.immigration = kv.get_or("immigration", "");
  c.migration = kv.get_or("migration", "");
  c.reference = kv.get_or("reference", "");
  c.out_dir = kv.get_or("out_dir", "out");
  if (const auto extra = kv.unused(); !extra.empty()) {
    throw InputError(source + ": unknown key '" + extra.front() + "'");
  }
  c.validate();
  return c;
}

RunConfig RunConfig::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse(in, path.string(), path.parent_path());
}

void RunConfig::validate() const {
  if (!(start < end)) throw InputError("config: start must precede end");
  if (runs < 1) throw InputError("config: runs must be at least 1");
  if (workers < 1) throw InputError("config: workers must be at least 1");
  if (max_age < 0) throw InputError("config: max_age must be non-negative");
  if (!(male_fraction >= 0.0 && male_fraction <= 1.0)) throw InputError("config: male_fraction outside [0,1]");
  if (im_mode == InternalMigrationMode::FullRegional && migration.empty()) {
    throw InputError("config: im_mode full-regional needs a migration tensor file");
  }
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "start = " << start.to_string() << '\n'
      << "end = " << end.to_string() << '\n'
      << "step = " << step.to_string() << '\n'
      << "seed = " << seed << '\n'
      << "runs = " << runs << '\n'
      << "workers = " << workers << '\n'
      << "im_mode = " << im_mode_name(im_mode) << '\n'
      << "max_age = " << max_age << '\n'
      << "male_fraction = " << csv::format_number(male_fraction) << '\n'
      << "regions = " << regions << '\n'
      << "params = " << params << '\n';
  if (!population.empty()) out << "population = " << population << '\n';
  if (!immigration.empty()) out << "immigration = " << immigration << '\n';
  if (!migration.empty()) out << "migration = " << migration << '\n';
  if (!reference.empty()) out << "reference = " << reference << '\n';
  out << "out_dir = " << out_dir << '\n';
  return out.str();
}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

std::vector<PopulationCell> read_population_csv(const std::filesystem::path& path, const RegionHierarchy& regions) {
  const auto table = csv::Table::read(path);
  const auto c_r = table.column("region");
  const auto c_s = table.column("sex");
  const auto c_a = table.column("age");
  const auto c_c = table.column("count");
  std::vector<PopulationCell> out;
  for (const auto& row : table.rows()) {
    PopulationCell cell;
    if (!regions.contains(row.fields[c_r])) throw InputError(table.where(row) + ": unknown region " + row.fields[c_r]);
    cell.region = regions.id(row.fields[c_r]);
    const auto& s = row.fields[c_s];
    if (s == "m") {
      cell.sex = Sex::Male;
    } else if (s == "f") {
      cell.sex = Sex::Female;
    } else {
      throw InputError(table.where(row) + ": sex must be m or f");
    }
    cell.age = static_cast<int>(table.integer(row, c_a));
    cell.count = table.integer(row, c_c);
    if (cell.age < 0 || cell.count < 0) throw InputError(table.where(row) + ": negative age or count");
    out.push_back(cell);
  }
  return out;
}

void write_population_csv(const std::filesystem::path& path, const std::vector<PopulationCell>& cells,
                          const RegionHierarchy& regions) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "region,sex,age,count\n";
  for (const auto& c : cells) out << regions.code(c.region) << ',' << sex_code(c.sex) << ',' << c.age << ',' << c.count << '\n';
}

}  // namespace popabm
