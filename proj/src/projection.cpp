#include "popabm/projection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "popabm/errors.hpp"

namespace popabm {

namespace {

// sum_{j=j0}^{j1-1} j^k for k = 0, 1, 2.
std::array<double, 3> power_sums(int j0, int j1) {
  auto s = [](double n) {
    return std::array<double, 3>{n, n * (n - 1.0) / 2.0, (n - 1.0) * n * (2.0 * n - 1.0) / 6.0};
  };
  if (j1 <= j0) return {0.0, 0.0, 0.0};
  const auto hi = s(j1), lo = s(j0);
  return {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
}

// c0 + c1 j + c2 j^2 summed over a day range.
double poly_sum(const std::array<double, 3>& ps, double c0, double c1, double c2) {
  return c0 * ps[0] + c1 * ps[1] + c2 * ps[2];
}

// Polynomial coefficients, lowest degree first.
using Poly = std::array<double, 5>;

// F(n) = sum_{j=0}^{n-1} f(j) for f of degree <= 3.
Poly prefix_sum(const Poly& f) {
  // sum j^0 = n; sum j = (n^2 - n)/2; sum j^2 = (2n^3 - 3n^2 + n)/6; sum j^3 = (n^4 - 2n^3 + n^2)/4
  Poly F{};
  F[1] += f[0];
  F[2] += f[1] / 2.0;
  F[1] -= f[1] / 2.0;
  F[3] += f[2] / 3.0;
  F[2] -= f[2] / 2.0;
  F[1] += f[2] / 6.0;
  F[4] += f[3] / 4.0;
  F[3] -= f[3] / 2.0;
  F[2] += f[3] / 4.0;
  return F;
}

// sum_e w_e G(X - u_e) given mom[i] = sum_e w_e u_e^i.
double eval_shifted(const std::array<double, 5>& mom, double X, const Poly& G) {
  static constexpr double binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  double xp[5] = {1.0, X, X * X, X * X * X, X * X * X * X};
  double total = 0.0;
  for (int k = 0; k < 5; ++k) {
    if (G[static_cast<std::size_t>(k)] == 0.0) continue;
    double inner = 0.0;
    for (int i = 0; i <= k; ++i) {
      const double t = binom[k][i] * xp[k - i] * mom[static_cast<std::size_t>(i)];
      inner += i % 2 ? -t : t;
    }
    total += G[static_cast<std::size_t>(k)] * inner;
  }
  return total;
}

struct Rates {
  double death = 0.0;  // per-day densities: p / life-year length
  double emig = 0.0;
  double birth = 0.0;
  double move = 0.0;
  std::span<const double> dest;  // destination distribution, aligned with model destinations
};

using ItemKey = std::tuple<std::int32_t, std::int32_t, int, int, bool>;  // start, birthdate, sex, age, counted

class Projector {
 public:

  Projector(const ProjectionSetup& setup, const ParameterSet& params, const RegionHierarchy& regions)
      : s_(setup), params_(params), regions_(regions), nreg_(regions.size()) {
    y0_ = s_.start.year();
    y1_ = s_.end.year();
    acc_.assign(static_cast<std::size_t>(kMetricCount) * static_cast<std::size_t>(y1_ - y0_ + 1) * nreg_ * kSexCount *
                    static_cast<std::size_t>(s_.max_age + 1),
                0.0);
    days_ = static_cast<std::size_t>(days_between(s_.start, s_.end)) + 1;
    newborns_.assign(days_ * nreg_ * kSexCount, 0.0);
    im_ = s_.im_mode == InternalMigrationMode::FullRegional && params_.destinations &&
          params_.table(ParamKind::InternalMigration);
  }

  void add_initial(std::span<const PopulationCell> cells) {
    for (const auto& c : cells) {
      const auto [lo, hi] = birthdate_window(s_.start, c.age);
      const double w = static_cast<double>(c.count) / static_cast<double>(days_between(lo, hi) + 1);
      for (Date bd = lo; bd <= hi; bd = bd.plus_days(1)) {
        item(s_.start, bd, c.sex, c.age, true)[static_cast<std::size_t>(c.region)] += w;
      }
    }
  }

  void add_immigrants() {
    const ParameterTable* t = params_.table(ParamKind::Immigration);
    if (!t) return;
    const int last = s_.end.plus_days(-1).year();
    for (int y = s_.start.year(); y <= last; ++y)
      for (RegionId r : t->rows())
        for (Sex sex : {Sex::Male, Sex::Female})
          for (int a = 0; a <= t->max_age(); ++a) {
            const double c = t->lookup(y, r, sex, a);
            if (c > 0.0) immigrant_cell(y, r, sex, a, c);
          }
  }

  void run() {
    for (Date d = s_.start; d <= s_.end; d = d.plus_days(1)) {
      while (!items_.empty() && std::get<0>(items_.begin()->first) == d.serial()) {
        auto node = items_.extract(items_.begin());
        process_item(node.key(), node.mapped());
      }
      if (d == s_.end) break;
      for (bool again = true; again;) {
        again = false;
        for (std::size_t r = 0; r < nreg_; ++r)
          for (Sex sex : {Sex::Male, Sex::Female}) {
            double& nb = newborns_[newborn_index(d, static_cast<RegionId>(r), sex)];
            if (nb <= 0.0) continue;
            const double m = nb;
            nb = 0.0;
            again = true;
            const int len = delta_to_next_birthday(d, d).days();
            std::vector<double> end(nreg_, 0.0);
            segment(d, len, len, 0, sex, static_cast<RegionId>(r), m, false, true, end);
            push_end(d.plus_days(len), d, sex, 1, end);
          }
      }
    }
  }

  RealCensus census() const {
    RealCensus out;
    for (int m = 0; m < kMetricCount; ++m)
      for (int y = y0_; y <= y1_; ++y)
        for (std::size_t r = 0; r < nreg_; ++r)
          for (Sex sex : {Sex::Male, Sex::Female})
            for (int a = 0; a <= s_.max_age; ++a) {
              const double v = acc_[index(static_cast<Metric>(m), y, static_cast<RegionId>(r), sex, a)];
              if (v != 0.0) out.set(static_cast<Metric>(m), {y, regions_.code(static_cast<RegionId>(r)), sex, a}, v);
            }
    return out;
  }

 private:
  std::size_t index(Metric m, int year, RegionId r, Sex sex, int age) const {
    const std::size_t a = static_cast<std::size_t>(std::min(age, s_.max_age));
    return (((static_cast<std::size_t>(m) * static_cast<std::size_t>(y1_ - y0_ + 1) +
              static_cast<std::size_t>(year - y0_)) *
                 nreg_ +
             static_cast<std::size_t>(r)) *
                kSexCount +
            static_cast<std::size_t>(index_of(sex))) *
               static_cast<std::size_t>(s_.max_age + 1) +
           a;
  }
  void record(Metric m, int year, RegionId r, Sex sex, int age, double v) {
    if (v != 0.0) acc_[index(m, year, r, sex, age)] += v;
  }
  std::size_t newborn_index(Date d, RegionId r, Sex sex) const {
    return (static_cast<std::size_t>(days_between(s_.start, d)) * nreg_ + static_cast<std::size_t>(r)) * kSexCount +
           static_cast<std::size_t>(index_of(sex));
  }

  std::vector<double>& item(Date start, Date bd, Sex sex, int age, bool counted) {
    auto& v = items_[ItemKey{start.serial(), bd.serial(), index_of(sex), age, counted}];
    if (v.empty()) v.assign(nreg_, 0.0);
    return v;
  }

  void push_end(Date at, Date bd, Sex sex, int age, const std::vector<double>& mass) {
    if (at > s_.end) return;
    auto& v = item(at, bd, sex, age, true);
    for (std::size_t r = 0; r < nreg_; ++r) v[r] += mass[r];
  }

  Rates rates(int year, RegionId r, Sex sex, int age, int life_year) const {
    Rates k;
    const double lf = static_cast<double>(life_year);
    if (const auto* t = params_.table(ParamKind::Death)) k.death = t->lookup(year, r, sex, age) / lf;
    if (const auto* t = params_.table(ParamKind::Emigration)) k.emig = t->lookup(year, r, sex, age) / lf;
    if (sex == Sex::Female)
      if (const auto* t = params_.table(ParamKind::Birth)) k.birth = t->lookup(year, r, sex, age) / lf;
    if (im_) {
      k.dest = params_.destinations->distribution(r, age);
      double total = 0.0;
      for (double q : k.dest) total += q;
      if (total > 0.0) k.move = params_.table(ParamKind::InternalMigration)->lookup(year, r, sex, age) / lf;
    }
    return k;
  }

  // Records a relocated share of `v` under the destination distribution.
  void record_moved(Metric m, int year, const Rates& k, Sex sex, int age, double v) {
    if (v == 0.0) return;
    const auto& dests = params_.destinations->destinations();
    for (std::size_t i = 0; i < dests.size(); ++i) record(m, year, dests[i], sex, age, v * k.dest[i]);
  }

  // One life-year segment [s, s + len) of mass m in region r. Event offsets
  // are uniform on 0..len-1, so each kind fires on day j with density p/lf.
  // End-of-segment survivors are added to `end` by region.
  void segment(Date s, int len, int lf, int age, Sex sex, RegionId r, double m, bool counted, bool births,
               std::vector<double>& end, const Rates* given = nullptr) {
    if (s == s_.end) {
      if (counted && s == jan_first(s.year())) record(Metric::P, s.year(), r, sex, age, m);
      return;
    }
    const Rates k = given ? *given : rates(s.year(), r, sex, age, lf);
    const double a = k.death, b = k.emig, mu = k.move;
    const int horizon = std::min(len, days_between(s, s_.end));
    const Date next_jan = jan_first(s.year() + 1);
    const int split = days_between(s, next_jan);

    auto events = [&](int j0, int j1, int year) {
      if (j1 <= j0) return;
      const auto ps = power_sums(j0, j1);
      // Death on day j needs no earlier emigration; emigration on day j needs
      // no death up to and including j. Relocation happened if its day < j.
      const double d_all = m * poly_sum(ps, a, -a * b, 0.0);
      const double d_moved = m * poly_sum(ps, 0.0, a * mu, -a * b * mu);
      const double e_all = m * poly_sum(ps, b * (1.0 - a), -a * b, 0.0);
      const double e_moved = m * poly_sum(ps, 0.0, b * (1.0 - a) * mu, -a * b * mu);
      // Relocation on day j needs survival through day j.
      const double im = m * mu * poly_sum(ps, (1.0 - a) * (1.0 - b), -(a + b) + 2.0 * a * b, a * b);
      record(Metric::D, year, r, sex, age, d_all - d_moved);
      record(Metric::E, year, r, sex, age, e_all - e_moved);
      if (mu > 0.0) {
        record_moved(Metric::D, year, k, sex, age, d_moved);
        record_moved(Metric::E, year, k, sex, age, e_moved);
        record(Metric::ImOut, year, r, sex, age, im);
        record_moved(Metric::ImIn, year, k, sex, age, im);
      }
      if (births && k.birth > 0.0) {
        for (int j = j0; j < j1; ++j) {
          const double x = j + 1.0;
          const double nb = m * k.birth * (1.0 - a * x) * (1.0 - b * x);
          const double moved = nb * mu * j;
          const Date d = s.plus_days(j);
          record(Metric::B, year, r, Sex::Female, age, nb - moved);
          add_newborns(d, r, nb - moved);
          if (moved != 0.0) {
            record_moved(Metric::B, year, k, Sex::Female, age, moved);
            const auto& dests = params_.destinations->destinations();
            for (std::size_t i = 0; i < dests.size(); ++i) add_newborns(d, dests[i], moved * k.dest[i]);
          }
        }
      }
    };
    events(0, std::min(split, horizon), s.year());
    events(split, horizon, s.year() + 1);

    // Jan-1 snapshot inside the segment: alive means no terminal event on an
    // earlier day; events dated on the snapshot day come after it.
    int snap = -1;
    if (s == jan_first(s.year()) && counted) {
      snap = 0;
    } else if (split < len && next_jan <= s_.end) {
      snap = split;
    }
    if (snap >= 0) {
      const double alive = m * (1.0 - a * snap) * (1.0 - b * snap);
      const double moved = alive * mu * snap;
      const int year = s.plus_days(snap).year();
      record(Metric::P, year, r, sex, age, alive - moved);
      if (moved != 0.0) record_moved(Metric::P, year, k, sex, age, moved);
    }

    if (days_between(s, s_.end) >= len) {
      const double alive = m * (1.0 - a * len) * (1.0 - b * len);
      const double moved = alive * mu * len;
      end[static_cast<std::size_t>(r)] += alive - moved;
      if (moved != 0.0) {
        const auto& dests = params_.destinations->destinations();
        for (std::size_t i = 0; i < dests.size(); ++i) end[static_cast<std::size_t>(dests[i])] += moved * k.dest[i];
      }
    }
  }

  void add_newborns(Date d, RegionId r, double mass) {
    newborns_[newborn_index(d, r, Sex::Male)] += mass * s_.male_fraction;
    newborns_[newborn_index(d, r, Sex::Female)] += mass * (1.0 - s_.male_fraction);
  }

  void process_item(const ItemKey& key, const std::vector<double>& mass) {
    const Date s = Date::from_serial(std::get<0>(key));
    const Date bd = Date::from_serial(std::get<1>(key));
    const Sex sex = static_cast<Sex>(std::get<2>(key));
    const int age = std::get<3>(key);
    const bool counted = std::get<4>(key);
    const int len = delta_to_next_birthday(s, bd).days();
    const int lf = life_year_length(s, bd).days();
    std::vector<double> end(nreg_, 0.0);
    for (std::size_t r = 0; r < nreg_; ++r)
      if (mass[r] != 0.0) segment(s, len, lf, age, sex, static_cast<RegionId>(r), mass[r], counted, true, end);
    push_end(s.plus_days(len), bd, sex, age + 1, end);
  }

  using Moments = std::array<double, 5>;  // sum w u^k for k = 0..4

  // Immigrants of one (year, region, sex, age) cell: entry day uniform over
  // the year, birthdate uniform over the window at entry. A birthdate bd is
  // drawn for entries e with anniversary_age(bd) <= e < anniversary_age+1(bd),
  // a contiguous range, so every per-birthdate sum over entries reduces to
  // differences of prefix moments of the entry weights (u = e - Jan 1).
  void immigrant_cell(int year, RegionId r, Sex sex, int age, double count) {
    const Date origin = jan_first(year);
    const Date first = std::max(origin, s_.start);
    const Date last = std::min(jan_first(year + 1), s_.end);
    if (!(first < last)) return;
    const double per_day = count / days_in_year(year);
    record(Metric::I, year, r, sex, age, per_day * days_between(first, last));

    const std::size_t span = 2 * 366 + 2;
    std::vector<double> weight(span, 0.0);
    std::vector<Moments> prefix(span + 1);
    for (std::size_t u = 0; u < span; ++u) {
      const Date e = origin.plus_days(static_cast<std::int32_t>(u));
      if (!(e < first) && e < last) {
        const auto [lo, hi] = birthdate_window(e, age);
        weight[u] = per_day / (days_between(lo, hi) + 1);
      }
      double p = weight[u];
      for (std::size_t i = 0; i < 5; ++i) {
        prefix[u + 1][i] = prefix[u][i] + p;
        p *= static_cast<double>(u);
      }
    }

    const bool mothers = sex == Sex::Female;
    std::array<std::vector<double>, 2> active{std::vector<double>(span + 1, 0.0), std::vector<double>(span + 1, 0.0)};
    std::array<std::vector<Moments>, 2> leaving{std::vector<Moments>(span), std::vector<Moments>(span)};
    const Date bd_lo = birthdate_window(first, age).first;
    const Date bd_hi = birthdate_window(last.plus_days(-1), age).second;
    for (Date bd = bd_lo; bd <= bd_hi; bd = bd.plus_days(1)) {
      const Date from = anniversary(bd, bd.year() + age);
      const Date next = anniversary(bd, bd.year() + age + 1);
      const Date e_lo = std::max(from, first);
      const Date e_hi = std::min(next, last).plus_days(-1);
      if (e_hi < e_lo) continue;
      const auto u_lo = static_cast<std::size_t>(days_between(origin, e_lo));
      const auto u_hi = static_cast<std::size_t>(days_between(origin, e_hi));
      Moments mom;
      for (std::size_t i = 0; i < 5; ++i) mom[i] = prefix[u_hi + 1][i] - prefix[u_lo][i];
      const int lf = days_between(from, next);
      first_segments(mom, origin, bd, next, lf, year, r, sex, age);
      if (mothers) {
        const std::size_t c = lf == 366 ? 1 : 0;
        active[c][u_lo] += 1.0;
        active[c][u_hi + 1] -= 1.0;
        const auto n = static_cast<std::size_t>(days_between(origin, next));
        if (n < span)
          for (std::size_t i = 0; i < 5; ++i) leaving[c][n][i] += mom[i];
      }
    }
    if (!mothers) return;
    std::vector<double> here(span, 0.0), moved(span, 0.0);
    for (std::size_t c = 0; c < 2; ++c) immigrant_births(active[c], leaving[c], weight, c ? 366 : 365, origin, year, r, age, here, moved);
    flush_births(origin, r, age, here, moved);
  }

  // First life-year segments of the immigrants sharing one birthdate; entry
  // e covers [e, next). `mom` holds the entry-weight moments relative to
  // `origin`.
  void first_segments(const Moments& mom, Date origin, Date bd, Date next, int lf, int year, RegionId r, Sex sex,
                      int age) {
    const Rates k = rates(year, r, sex, age, lf);
    const double a = k.death, b = k.emig, mu = k.move;
    const Date jan = jan_first(year + 1);
    const Date stop = std::min(next, s_.end);
    const double xa = days_between(origin, std::min(jan, stop));
    const double xj = days_between(origin, jan);
    const double xs = days_between(origin, stop);
    const bool spans = jan < stop;
    auto split_sum = [&](const Poly& f, int y) {
      const Poly F = prefix_sum(f);
      return y == year ? eval_shifted(mom, xa, F) : spans ? eval_shifted(mom, xs, F) - eval_shifted(mom, xj, F) : 0.0;
    };
    const Poly d_all{a, -a * b, 0, 0, 0};
    const Poly d_mov{0, a * mu, -a * b * mu, 0, 0};
    const Poly e_all{b * (1.0 - a), -a * b, 0, 0, 0};
    const Poly e_mov{0, b * (1.0 - a) * mu, -a * b * mu, 0, 0};
    const Poly im{mu * (1.0 - a) * (1.0 - b), mu * (-(a + b) + 2.0 * a * b), mu * a * b, 0, 0};
    for (int y : {year, year + 1}) {
      if (y > y1_ || (y != year && !spans)) continue;
      const double dm = split_sum(d_mov, y), em = split_sum(e_mov, y);
      record(Metric::D, y, r, sex, age, split_sum(d_all, y) - dm);
      record(Metric::E, y, r, sex, age, split_sum(e_all, y) - em);
      if (mu > 0.0) {
        const double moves = split_sum(im, y);
        record_moved(Metric::D, y, k, sex, age, dm);
        record_moved(Metric::E, y, k, sex, age, em);
        record(Metric::ImOut, y, r, sex, age, moves);
        record_moved(Metric::ImIn, y, k, sex, age, moves);
      }
    }
    const Poly alive{1.0, -(a + b), a * b, 0, 0};
    const Poly alive_moved{0, mu, -mu * (a + b), mu * a * b, 0};
    if (jan < next && jan <= s_.end) {
      const double moved = eval_shifted(mom, xj, alive_moved);
      record(Metric::P, year + 1, r, sex, age, eval_shifted(mom, xj, alive) - moved);
      if (moved != 0.0) record_moved(Metric::P, year + 1, k, sex, age, moved);
    }
    if (next <= s_.end) {
      const double xn = days_between(origin, next);
      const double moved = eval_shifted(mom, xn, alive_moved);
      std::vector<double> end(nreg_, 0.0);
      end[static_cast<std::size_t>(r)] = eval_shifted(mom, xn, alive) - moved;
      if (moved != 0.0) {
        const auto& dests = params_.destinations->destinations();
        for (std::size_t i = 0; i < dests.size(); ++i) end[static_cast<std::size_t>(dests[i])] += moved * k.dest[i];
      }
      push_end(next, bd, sex, age + 1, end);
    }
  }

  // Births of immigrant mothers in their first segment, for one life-year
  // length. A mother entering on e with next birthday n gives birth on day d
  // in [e, n) with density c (1 - a x)(1 - b x), x = d - e + 1; the
  // relocated share carries an extra mu (x - 1). The moments of the active
  // (entry, birthdate) pairs are swept across the days.
  void immigrant_births(const std::vector<double>& active, const std::vector<Moments>& leaving,
                        const std::vector<double>& weight, int lf, Date origin, int year, RegionId r, int age,
                        std::vector<double>& here, std::vector<double>& moved_out) {
    const Rates k = rates(year, r, Sex::Female, age, lf);
    if (k.birth <= 0.0) return;
    const double a = k.death, b = k.emig, mu = k.move, c = k.birth;
    const Poly all{c, -c * (a + b), c * a * b, 0.0, 0.0};
    const Poly moved{-c * mu, c * mu * (1.0 + a + b), -c * mu * (a + b + a * b), c * mu * a * b, 0.0};
    const auto stop = static_cast<std::size_t>(
        std::clamp<std::int64_t>(days_between(origin, s_.end), 0, static_cast<std::int64_t>(here.size())));
    Moments mom{};
    double count = 0.0;
    for (std::size_t d = 0; d < stop; ++d) {
      count += active[d];
      double p = weight[d] * count;
      for (std::size_t i = 0; i < 5; ++i) {
        mom[i] += p - leaving[d][i];
        p *= static_cast<double>(d);
      }
      if (mom[0] <= 0.0) continue;
      const double X = static_cast<double>(d) + 1.0;
      const double mv = mu > 0.0 ? eval_shifted(mom, X, moved) : 0.0;
      here[d] += eval_shifted(mom, X, all) - mv;
      moved_out[d] += mv;
    }
  }

  void flush_births(Date origin, RegionId r, int age, std::vector<double>& here, std::vector<double>& moved) {
    const Rates k = rates(origin.year(), r, Sex::Female, age, 365);
    for (std::size_t i = 0; i < here.size(); ++i) {
      if (here[i] == 0.0 && moved[i] == 0.0) continue;
      const Date d = origin.plus_days(static_cast<std::int32_t>(i));
      record(Metric::B, d.year(), r, Sex::Female, age, here[i]);
      add_newborns(d, r, here[i]);
      if (moved[i] != 0.0) {
        record_moved(Metric::B, d.year(), k, Sex::Female, age, moved[i]);
        const auto& dests = params_.destinations->destinations();
        for (std::size_t j = 0; j < dests.size(); ++j) add_newborns(d, dests[j], moved[i] * k.dest[j]);
      }
    }
  }

  ProjectionSetup s_;
  const ParameterSet& params_;
  const RegionHierarchy& regions_;
  std::size_t nreg_;
  int y0_ = 0, y1_ = 0;
  std::size_t days_ = 0;
  bool im_ = false;
  std::vector<double> acc_;
  std::vector<double> newborns_;
  std::map<ItemKey, std::vector<double>> items_;
};

}  // namespace

RealCensus project_expected(const ProjectionSetup& setup, const ParameterSet& params, const RegionHierarchy& regions,
                            std::span<const PopulationCell> population) {
  if (!(setup.start < setup.end)) throw InputError("projection needs start before end");
  Projector p(setup, params, regions);
  p.add_initial(population);
  p.add_immigrants();
  p.run();
  return p.census();
}

}  // namespace popabm
