#include "doctest.h"
#include "support.hpp"
#include "swe/basis.hpp"
#include "swe/quadrature.hpp"

using namespace swe;

namespace {

double exact_monomial(int p) { return p % 2 ? 0.0 : 2.0 / (p + 1); }

double apply(const Rule1D<double>& r, const auto& f) {
  double s = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Lobatto rules are exact to degree 2n-3 and include the endpoints") {
  for (int n = 2; n <= 8; ++n) {
    const Rule1D<double> r = gauss_lobatto<double>(n);
    CHECK(r.nodes.front() == -1.0);
    CHECK(r.nodes.back() == 1.0);
    for (int i = 1; i < n; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    for (int p = 0; p <= 2 * n - 3; ++p)
      CHECK(std::abs(apply(r, [&](double x) { return std::pow(x, p); }) - exact_monomial(p)) < 1e-14);
    // Degree 2n − 2 is where exactness ends.
    CHECK(std::abs(apply(r, [&](double x) { return std::pow(x, 2 * n - 2); }) - exact_monomial(2 * n - 2)) > 1e-6);
  }
  CHECK_THROWS_AS(gauss_lobatto<double>(1), Error);
}

TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1") {
  for (int n = 1; n <= 10; ++n) {
    const Rule1D<double> r = gauss_legendre<double>(n);
    for (int p = 0; p <= 2 * n - 1; ++p)
      CHECK(std::abs(apply(r, [&](double x) { return std::pow(x, p); }) - exact_monomial(p)) < 1e-14);
    CHECK(std::abs(apply(r, [&](double x) { return std::pow(x, 2 * n); }) - exact_monomial(2 * n)) > 1e-8);
  }
  CHECK_THROWS_AS(gauss_legendre<double>(0), Error);
}

TEST_CASE("Legendre recurrence values and derivatives") {
  for (int i = 0; i < 50; ++i) {
    const double x = test::uniform(-1, 1);
    const auto [p3, d3] = legendre(3, x);
    CHECK(p3 == doctest::Approx(0.5 * (5 * x * x * x - 3 * x)).epsilon(1e-14));
    CHECK(d3 == doctest::Approx(0.5 * (15 * x * x - 3)).epsilon(1e-13));
    for (int n = 0; n <= 6; ++n) {
      const double fd = test::central_diff5([&](double z) { return legendre(n, z).first; }, x, 1e-3);
      CHECK(std::abs(legendre(n, x).second - fd) < 1e-9);
    }
  }
  CHECK(legendre(7, 1.0).first == doctest::Approx(1.0));
  CHECK(legendre(7, -1.0).first == doctest::Approx(-1.0));
}

TEST_CASE("total-degree basis is orthogonal with the stated norms") {
  for (int degree = 0; degree <= 4; ++degree) {
    const int nb = basis_size(degree);
    CHECK(nb == (degree + 1) * (degree + 2) / 2);
    const Rule1D<double> r = gauss_legendre<double>(degree + 2);
    for (int a = 0; a < nb; ++a) {
      const auto [ia, ja] = basis_index(a);
      CHECK(ia + ja <= degree);
      CHECK(ia >= 0);
      CHECK(ja >= 0);
      for (int b = 0; b < nb; ++b) {
        double gram = 0;
        for (std::size_t p = 0; p < r.nodes.size(); ++p)
          for (std::size_t q = 0; q < r.nodes.size(); ++q)
            gram += r.weights[p] * r.weights[q] * basis_eval(a, r.nodes[p], r.nodes[q]).value *
                    basis_eval(b, r.nodes[p], r.nodes[q]).value;
        CHECK(std::abs(gram - (a == b ? basis_norm2<double>(a) : 0.0)) < 1e-13);
      }
    }
  }
}

TEST_CASE("basis indices enumerate each monomial degree pair once") {
  const int nb = basis_size(5);
  std::vector<std::pair<int, int>> seen;
  for (int l = 0; l < nb; ++l) seen.push_back(basis_index(l));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  CHECK(basis_index(0) == std::pair{0, 0});
}

TEST_CASE("basis gradients match finite differences") {
  for (int l = 0; l < basis_size(3); ++l) {
    const double s = test::uniform(-1, 1), t = test::uniform(-1, 1);
    const BasisValue<double> v = basis_eval(l, s, t);
    CHECK(std::abs(v.ds - test::central_diff5([&](double z) { return basis_eval(l, z, t).value; }, s, 1e-3)) < 1e-9);
    CHECK(std::abs(v.dt - test::central_diff5([&](double z) { return basis_eval(l, s, z).value; }, t, 1e-3)) < 1e-9);
  }
}

TEST_CASE("adaptive Gauss-Kronrod integration") {
  CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -3.0, 3.0, 1e-13) ==
        doctest::Approx(std::sqrt(kPi<double>) * std::erf(3.0)).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(integrate_adaptive([](double x) { return 1 / (1 + 25 * x * x); }, -1.0, 1.0, 1e-13) ==
        doctest::Approx(0.4 * std::atan(5.0)).epsilon(1e-12));
}
