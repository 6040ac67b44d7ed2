#include "cde/series.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "cde/errors.hpp"

namespace cde {

namespace {
void check_consistent(const PowerSeries& s) {
  if (static_cast<int>(s.coeffs.size()) != s.order - s.min_degree)
    throw ValidationError("series coeffs length does not match order - minDegree");
}
}  // namespace

PowerSeries PowerSeries::zero(const Cplx& center, int order) {
  PowerSeries s;
  s.center = center;
  s.min_degree = 0;
  s.order = order;
  s.coeffs.assign(static_cast<std::size_t>(std::max(order, 0)), Cplx(0));
  return s;
}

PowerSeries PowerSeries::constant(const Cplx& value, int order) {
  PowerSeries s = zero(Cplx(0), order);
  if (order > 0) s.coeffs[0] = value;
  return s;
}

PowerSeries PowerSeries::taylor(std::vector<Cplx> coeffs) {
  PowerSeries s;
  s.center = Cplx(0);
  s.min_degree = 0;
  s.order = static_cast<int>(coeffs.size());
  s.coeffs = std::move(coeffs);
  return s;
}

const Cplx& PowerSeries::coeff(int d) const {
  static const Cplx kZero(0);
  if (d < min_degree || d >= order) return kZero;
  return coeffs[static_cast<std::size_t>(d - min_degree)];
}

void PowerSeries::set_coeff(int d, Cplx v) {
  if (d < min_degree || d >= order)
    throw ValidationError("set_coeff outside stored degree window");
  coeffs[static_cast<std::size_t>(d - min_degree)] = std::move(v);
}

PowerSeries PowerSeries::trimmed() const {
  PowerSeries s = *this;
  while (!s.coeffs.empty() && s.coeffs.front().is_zero() && s.min_degree < 0) {
    s.coeffs.erase(s.coeffs.begin());
    ++s.min_degree;
  }
  return s;
}

PowerSeries PowerSeries::truncated(int new_order) const {
  check_consistent(*this);
  if (new_order >= order) return *this;
  PowerSeries s;
  s.center = center;
  s.min_degree = std::min(min_degree, new_order);
  s.order = new_order;
  s.coeffs.assign(coeffs.begin(),
                  coeffs.begin() + std::max(0, new_order - s.min_degree));
  s.tail = std::nullopt;
  return s;
}

PowerSeries series_add(const PowerSeries& a, const PowerSeries& b) {
  if (!a.same_center(b)) throw ValidationError("series_add: center mismatch");
  check_consistent(a);
  check_consistent(b);
  PowerSeries r;
  r.center = a.center;
  r.min_degree = std::min(a.min_degree, b.min_degree);
  r.order = std::min(a.order, b.order);
  if (r.order <= r.min_degree) {
    r.order = r.min_degree;
    return r;
  }
  r.coeffs.assign(static_cast<std::size_t>(r.order - r.min_degree), Cplx(0));
  for (int d = r.min_degree; d < r.order; ++d)
    r.set_coeff(d, a.coeff(d) + b.coeff(d));
  return r;
}

PowerSeries series_sub(const PowerSeries& a, const PowerSeries& b) {
  return series_add(a, series_scale(b, Cplx(-1)));
}

PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b) {
  if (!a.same_center(b)) throw ValidationError("series_mul: center mismatch");
  check_consistent(a);
  check_consistent(b);
  PowerSeries r;
  r.center = a.center;
  r.min_degree = a.min_degree + b.min_degree;
  // Degree d of the product needs every split i + j = d with i < order_a and
  // j < order_b: valid through min(order_a + min_b, order_b + min_a) - 1.
  r.order = std::min(a.order + b.min_degree, b.order + a.min_degree);
  if (a.coeffs.empty() || b.coeffs.empty()) {
    r.order = r.min_degree;
    return r;
  }
  r.coeffs.assign(static_cast<std::size_t>(std::max(0, r.order - r.min_degree)), Cplx(0));
  for (int i = 0; i < a.length(); ++i) {
    if (a.coeffs[static_cast<std::size_t>(i)].is_zero()) continue;
    int da = a.min_degree + i;
    for (int j = 0; j < b.length(); ++j) {
      int d = da + b.min_degree + j;
      if (d >= r.order) break;
      r.coeffs[static_cast<std::size_t>(d - r.min_degree)] +=
          a.coeffs[static_cast<std::size_t>(i)] * b.coeffs[static_cast<std::size_t>(j)];
    }
  }
  return r;
}

PowerSeries series_recip(const PowerSeries& a) {
  check_consistent(a);
  PowerSeries t = a.trimmed();
  if (t.coeffs.empty() || t.coeffs.front().is_zero())
    throw ValidationError("series_recip: zero leading coefficient");
  int n = t.length();
  PowerSeries r;
  r.center = t.center;
  r.min_degree = -t.min_degree;
  r.order = r.min_degree + n;
  r.coeffs.assign(static_cast<std::size_t>(n), Cplx(0));
  const Cplx& lead = t.coeffs.front();
  r.coeffs[0] = Cplx(1) / lead;
  // convolution solve: sum_{i+j=k} t[i] r[j] = 0 for k >= 1
  for (int k = 1; k < n; ++k) {
    Cplx acc(0);
    for (int i = 1; i <= k; ++i)
      acc += t.coeffs[static_cast<std::size_t>(i)] * r.coeffs[static_cast<std::size_t>(k - i)];
    r.coeffs[static_cast<std::size_t>(k)] = -acc / lead;
  }
  return r;
}

PowerSeries series_compose(const PowerSeries& outer, const PowerSeries& inner) {
  check_consistent(outer);
  check_consistent(inner);
  if (outer.min_degree < 0)
    throw ValidationError("series_compose: outer must be a Taylor series");
  for (int d = inner.min_degree; d <= 0; ++d)
    if (!inner.coeff(d).is_zero())
      throw ValidationError("series_compose: inner must have zero constant term");
  int n = std::min(outer.order, inner.order);
  if (n <= 0) return PowerSeries::zero(inner.center, std::max(n, 0));

  std::vector<Cplx> in(static_cast<std::size_t>(n), Cplx(0));
  for (int d = 1; d < n; ++d) in[static_cast<std::size_t>(d)] = inner.coeff(d);

  // Horner on truncated series: acc = acc * in + o_d
  std::vector<Cplx> acc(static_cast<std::size_t>(n), Cplx(0));
  for (int d = outer.order - 1; d >= 0; --d) {
    std::vector<Cplx> next(static_cast<std::size_t>(n), Cplx(0));
    for (int i = 0; i < n; ++i) {
      if (acc[static_cast<std::size_t>(i)].is_zero()) continue;
      for (int j = 1; i + j < n; ++j)
        next[static_cast<std::size_t>(i + j)] +=
            acc[static_cast<std::size_t>(i)] * in[static_cast<std::size_t>(j)];
    }
    acc = std::move(next);
    if (d >= outer.min_degree) acc[0] += outer.coeff(d);
  }
  PowerSeries r;
  r.center = inner.center;
  r.min_degree = 0;
  r.order = n;
  r.coeffs = std::move(acc);
  return r;
}

PowerSeries series_derivative(const PowerSeries& a) {
  check_consistent(a);
  PowerSeries r;
  r.center = a.center;
  r.min_degree = a.min_degree - 1;
  r.order = a.order - 1;
  r.coeffs.assign(static_cast<std::size_t>(std::max(0, r.order - r.min_degree)), Cplx(0));
  for (int d = a.min_degree; d < a.order; ++d) {
    if (d == 0) continue;
    r.set_coeff(d - 1, a.coeff(d) * Cplx(Real(d)));
  }
  // degree -1 slot of a Taylor derivative is spurious; normalize
  if (a.min_degree == 0 && !r.coeffs.empty()) {
    r.coeffs.erase(r.coeffs.begin());
    ++r.min_degree;
  }
  return r;
}

PowerSeries series_scale(const PowerSeries& a, const Cplx& c) {
  PowerSeries r = a;
  for (auto& v : r.coeffs) v *= c;
  return r;
}

PowerSeries series_shift(const PowerSeries& a, int k) {
  PowerSeries r = a;
  r.min_degree += k;
  r.order += k;
  return r;
}

Cplx series_eval(const PowerSeries& a, const Cplx& x) {
  check_consistent(a);
  Cplx u = x - a.center;
  if (a.tail) {
    if (abs(u) >= a.tail->radius)
      throw ValidationError("series_eval outside stated validity radius");
  }
  Cplx acc(0);
  for (int i = a.length() - 1; i >= 0; --i) {
    acc *= u;
    acc += a.coeffs[static_cast<std::size_t>(i)];
  }
  if (a.min_degree > 0) {
    acc *= pow(u, static_cast<long>(a.min_degree));
  } else if (a.min_degree < 0) {
    if (u.is_zero()) throw EvalError("Laurent series evaluated at its pole");
    acc /= pow(u, static_cast<long>(-a.min_degree));
  }
  return acc;
}

std::string series_to_json(const PowerSeries& a) {
  nlohmann::json j;
  j["center"] = {to_string(a.center.re), to_string(a.center.im)};
  j["minDegree"] = a.min_degree;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : a.coeffs) cs.push_back({to_string(c.re), to_string(c.im)});
  j["coeffs"] = std::move(cs);
  j["order"] = a.order;
  return j.dump(2);
}

PowerSeries series_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PowerSeries s;
  s.center = Cplx(parse_real(j.at("center").at(0).get<std::string>()),
                  parse_real(j.at("center").at(1).get<std::string>()));
  s.min_degree = j.at("minDegree").get<int>();
  s.order = j.at("order").get<int>();
  for (const auto& c : j.at("coeffs"))
    s.coeffs.emplace_back(parse_real(c.at(0).get<std::string>()),
                          parse_real(c.at(1).get<std::string>()));
  if (static_cast<int>(s.coeffs.size()) != s.order - s.min_degree)
    throw ValidationError("series JSON: coeffs length mismatch");
  return s;
}

}  // namespace cde
