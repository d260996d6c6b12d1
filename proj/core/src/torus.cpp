#include "dynsense/torus.hpp"

namespace dynsense::systems {

TorusPoint::TorusPoint(std::vector<CircleCoord> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw UsageError("torus point needs at least one coordinate");
  for (const auto& c : coords_) coords_.front().check_same_bits(c);
}

TorusPoint TorusPoint::zero(int dim, unsigned bits) {
  if (dim < 1) throw UsageError("torus dimension must be >= 1");
  return TorusPoint(std::vector<CircleCoord>(static_cast<std::size_t>(dim),
                                             CircleCoord::zero(bits)));
}

void TorusPoint::set_coord(int i, const CircleCoord& c) {
  coords_.front().check_same_bits(c);
  coords_.at(static_cast<std::size_t>(i)) = c;
}

Dyadic torus_metric(const TorusPoint& x, const TorusPoint& y) {
  if (x.dim() != y.dim()) throw UsageError("torus metric dimension mismatch");
  Dyadic best = Dyadic::zero();
  for (int i = 0; i < x.dim(); ++i) {
    Dyadic d = circle_metric(x.coord(i), y.coord(i));
    if (best < d) best = d;
  }
  return best;
}

TorusPoint skew_step(const TorusPoint& p, const CircleCoord& alpha) {
  std::vector<CircleCoord> c = p.coords();
  c.front().check_same_bits(alpha);
  // descending order keeps the pre-step value of coordinate j-1 available
  for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j)
    c[static_cast<std::size_t>(j)] =
        c[static_cast<std::size_t>(j)].plus(c[static_cast<std::size_t>(j - 1)]);
  c[0] = c[0].plus(alpha);
  return TorusPoint(std::move(c));
}

TorusPoint skew_step_back(const TorusPoint& p, const CircleCoord& alpha) {
  std::vector<CircleCoord> c = p.coords();
  c.front().check_same_bits(alpha);
  c[0] = c[0].minus(alpha);
  for (std::size_t j = 1; j < c.size(); ++j) c[j] = c[j].minus(c[j - 1]);
  return TorusPoint(std::move(c));
}

std::vector<u128> binomial_row_wrap(std::int64_t n, int kmax, unsigned bits,
                                    int max_degree) {
  if (n < 0) throw UsageError("binomial row needs nonnegative n");
  if (kmax < 0) throw UsageError("binomial degree must be nonnegative");
  if (kmax > max_degree) throw ResourceLimitError("binomial degree exceeds cap");
  const u128 mask = bits == 128 ? ~u128{0} : ((u128{1} << bits) - 1);
  std::vector<u128> row(static_cast<std::size_t>(kmax) + 1, 0);
  row[0] = 1;
  for (std::int64_t m = 1; m <= n; ++m) {
    const int top = kmax < m ? kmax : static_cast<int>(m);
    for (int i = top; i >= 1; --i)
      row[static_cast<std::size_t>(i)] =
          (row[static_cast<std::size_t>(i)] + row[static_cast<std::size_t>(i - 1)]) &
          mask;
  }
  return row;
}

u128 binomial_wrap(std::int64_t n, int k, unsigned bits, int max_degree) {
  return binomial_row_wrap(n, k, bits, max_degree).back();
}

TorusPoint skew_iterate_closed(const TorusPoint& p, const CircleCoord& alpha,
                               std::int64_t n, int max_degree) {
  if (n < 0) throw UsageError("closed-form iterate needs nonnegative n");
  p.coord(0).check_same_bits(alpha);
  const unsigned bits = p.bits();
  const int d = p.dim();
  const std::vector<u128> row = binomial_row_wrap(n, d, bits, max_degree);
  const u128 mask = alpha.mask();

  std::vector<CircleCoord> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int j = 1; j <= d; ++j) {
    u128 acc = 0;
    // i = 0 term uses alpha
    acc = (acc + row[static_cast<std::size_t>(j)] * alpha.raw()) & mask;
    for (int i = 1; i <= j; ++i)
      acc = (acc + row[static_cast<std::size_t>(j - i)] * p.coord(i - 1).raw()) & mask;
    out.emplace_back(acc, bits);
  }
  return TorusPoint(std::move(out));
}

}  // namespace dynsense::systems
