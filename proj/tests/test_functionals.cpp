#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "symek/functional.hpp"
#include "symek/rng.hpp"

using namespace symek;

namespace {

std::vector<double> raw(const FunctionElement& u) { return {u.values().begin(), u.values().end()}; }

double well(double s) { return 0.25 * s * s * s * s - 0.5 * s * s; }

struct Named {
  const char* name;
  FunctionalPtr f;
};

std::vector<Named> catalog_instances() {
  const auto g = ModelDescriptor::grid1d(9, 0.25);
  const auto v = ModelDescriptor::vector(6);
  return {{"quadratic vector", make_functional("quadratic", v)},
          {"quadratic grid", make_functional("quadratic", g)},
          {"dirichlet", make_functional("dirichlet", g)},
          {"dirichlet W=0", make_functional("dirichlet", g, {{"well", 0.0}})},
          {"dirichlet-box", make_functional("dirichlet-box", g)}};
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("quadratic target values") {
  const auto m = ModelDescriptor::vector(3);
  const FunctionElement t(m, {3, 2, 1});
  const auto f = build_quadratic_target(t);
  CHECK(f->eval(t) == 0.0);
  CHECK(f->eval(FunctionElement(m, {1, 2, 3})) == 8.0);
  CHECK(f->known_min_value() == 0.0);
  CHECK_THROWS_AS(build_quadratic_target(FunctionElement(m, {1, 2, 3})), Error);
}

TEST_CASE("dirichlet with zero extension matches direct summation") {
  const auto g = ModelDescriptor::grid1d(5, 0.5);
  const auto zero_load = FunctionElement::zeros(g);
  const auto f0 = build_dirichlet_potential(zero_load, Potential::zero());
  // a constant c only pays on the two boundary edges: 2 * c^2 / (2h)
  CHECK(f0->eval(FunctionElement(g, {0, 0, 0, 0, 0})) == 0.0);
  CHECK(f0->eval(FunctionElement(g, {1, 1, 1, 1, 1})) == doctest::Approx(1.0 / 0.5));
  CHECK(f0->eval(FunctionElement(g, {0, 0, 1, 0, 0})) == doctest::Approx(oracle::dirichlet_on_cone(
                                                            {0, 0, 1, 0, 0}, {0, 0, 0, 0, 0}, 0.5, [](double) { return 0.0; })));

  const auto load = default_load(g, 4.0, 0.5);
  const auto f = build_dirichlet_potential(load, Potential::double_well(), 2.0);
  for (int k = 0; k < 200; ++k) {
    Engine e = derive_engine(2, k);
    const auto u = random_element(g, e, 2.0);
    double neg2 = 0.0;
    for (double x : u.values())
      if (x < 0) neg2 += x * x;
    const double expect = oracle::dirichlet_on_cone(raw(u), raw(load), 0.5, well) + 2.0 * 0.5 * neg2;
    REQUIRE(f->eval(u) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("builders validate their inputs") {
  const auto g = ModelDescriptor::grid1d(5, 0.5);
  CHECK_THROWS_AS(build_dirichlet_potential(FunctionElement(g, {0, 2, 1, 1, 0}), Potential::zero()), Error);
  CHECK_THROWS_AS(build_dirichlet_potential(FunctionElement(g, {0, -1, 0, -1, 0}), Potential::zero()), Error);
  CHECK_THROWS_AS(make_functional("dirichlet", ModelDescriptor::vector(4)), Error);
  CHECK_THROWS_AS(make_functional("nope", g), Error);
  CHECK_THROWS_AS(make_functional("quadratic", g, {{"amp", 1.0}}), Error);
  CHECK_THROWS_AS(build_nonsmooth_box(make_functional("dirichlet", g), 0.0), Error);
  try {
    build_dirichlet_potential(FunctionElement(g, {0, -1, 0, -1, 0}), Potential::zero());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNonnegative);
  }
}

TEST_CASE("tilted minima of the potentials") {
  const auto W = Potential::double_well();
  for (double gval : {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0}) {
    double brute = 0.0;
    for (int i = 0; i <= 400000; ++i) {
      const double s = i * 1e-5;
      brute = std::min(brute, well(s) - gval * s);
    }
    CHECK(*W.tilted_min(gval) == doctest::Approx(brute).epsilon(1e-8));
  }
  CHECK_FALSE(Potential::zero().tilted_min(1.0).has_value());
  CHECK(*Potential::zero().tilted_min(0.0) == 0.0);
}

TEST_CASE("lower bounds hold on random samples") {
  for (const auto& [name, f] : catalog_instances()) {
    CAPTURE(name);
    const double lb = f->lower_bound();
    for (int k = 0; k < 10000; ++k) {
      Engine e = derive_engine(13, k);
      const double scale = 0.25 + 2.0 * (k % 8) / 8.0;
      const auto u = k % 2 ? random_element(f->model(), e, scale) : random_cone_element(f->model(), e, scale);
      REQUIRE(f->eval(u) >= lb);
    }
  }
}

TEST_CASE("gradients match central differences") {
  for (const auto& [name, f] : catalog_instances()) {
    CAPTURE(name);
    int checked = 0;
    for (int k = 0; checked < 100 && k < 1000; ++k) {
      Engine e = derive_engine(17, k);
      auto u = random_element(f->model(), e, 0.45);
      if (std::string(name) == "dirichlet-box")  // strictly inside the box
        u = theta(u) + FunctionElement(u.model(), std::vector<double>(u.size(), 0.02));
      bool near_kink = false;
      for (double x : u.values()) near_kink |= std::fabs(x) < 1e-4;
      if (near_kink) continue;
      const auto grad = f->gradient(u);
      REQUIRE(grad.has_value());
      double err2 = 0.0, ref2 = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        std::vector<double> p = raw(u), m = raw(u);
        p[i] += 1e-6;
        m[i] -= 1e-6;
        const double fd = (f->eval(FunctionElement(u.model(), p)) - f->eval(FunctionElement(u.model(), m))) / 2e-6;
        err2 += (fd - (*grad)[i]) * (fd - (*grad)[i]);
        ref2 += (*grad)[i] * (*grad)[i];
      }
      REQUIRE(std::sqrt(err2) <= 1e-5 * std::max(std::sqrt(ref2), 1.0));
      ++checked;
    }
    CHECK(checked == 100);
  }
}

TEST_CASE("cone_reduce never increases f") {
  for (const auto& [name, f] : catalog_instances()) {
    CAPTURE(name);
    for (int k = 0; k < 1000; ++k) {
      Engine e = derive_engine(19, k);
      const auto u = random_element(f->model(), e, 0.4 + (k % 3));
      const auto r = f->cone_reduce(u);
      REQUIRE(r.in_cone());
      REQUIRE(std::isfinite(f->eval(r)));
      REQUIRE(f->eval(r) <= f->eval(u) + 1e-12);
    }
  }
}

TEST_CASE("box indicator") {
  const auto g = ModelDescriptor::grid1d(7, 0.25);
  const auto base = make_functional("dirichlet", g);
  const auto box = build_nonsmooth_box(base, 0.5);
  const FunctionElement inside(g, {0.1, 0.2, 0.3, 0.5, 0.3, 0.2, 0.0});
  CHECK(box->eval(inside) == base->eval(inside));
  CHECK(box->eval(FunctionElement(g, {0.1, 0.2, 0.3, 0.51, 0.3, 0.2, 0.0})) == kInfinity);
  CHECK(box->eval(FunctionElement(g, {0.1, 0.2, -0.1, 0.5, 0.3, 0.2, 0.0})) == kInfinity);
  CHECK_FALSE(box->gradient(inside).has_value());  // touches both faces
  for (int k = 0; k < 500; ++k) {
    Engine e = derive_engine(23, k);
    const auto u = random_cone_element(g, e, 0.5);
    REQUIRE(std::isfinite(box->eval(u)));
    for (const auto& H : polarizer_family(g)) REQUIRE(std::isfinite(box->eval(polarize(u, H))));
  }
}

TEST_CASE("monotonicity checker") {
  for (const auto& [name, f] : catalog_instances()) {
    CAPTURE(name);
    const auto r = check_polarization_monotone(*f, 1000, 5);
    CHECK(r.passed);
    CHECK(r.max_violation <= 1e-10);
  }
  const auto g = ModelDescriptor::grid1d(9, 0.25);
  const auto control = make_functional("reverse-hardy", g);
  CHECK_FALSE(control->claims_polarization_monotone());
  const auto r = check_polarization_monotone(*control, 1000, 5);
  CHECK_FALSE(r.passed);
  CHECK(r.max_violation > 0.0);
  CHECK_FALSE(r.witness.empty());
  CHECK(check_polarization_monotone(*control, 1000, 5).witness == r.witness);
}

TEST_CASE("inner_min is competitive with an exhaustive lattice search") {
  const auto g = ModelDescriptor::grid1d(5, 0.5);
  const auto dir = make_functional("dirichlet", g);
  const auto box = make_functional("dirichlet-box", g, {{"upper", 1.0}});
  std::vector<std::vector<double>> lattice;
  {
    std::vector<int> idx(5, 0);
    for (;;) {
      std::vector<double> p(5);
      for (int i = 0; i < 5; ++i) p[i] = 0.125 * idx[i];
      lattice.push_back(p);
      int i = 4;
      while (i >= 0 && ++idx[i] == 9) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  for (const auto* f : {dir.get(), box.get()}) {
    CAPTURE(f->name());
    for (int k = 0; k < 3; ++k) {
      Engine e = derive_engine(29, k);
      const auto c = random_cone_element(g, e);
      const double sigma = 0.2 * (k + 1);
      auto phi = [&](const FunctionElement& w) { return f->eval(w) + sigma * dist_X(w, c); };
      double best = kInfinity;
      for (const auto& p : lattice) best = std::min(best, phi(FunctionElement(g, p)));
      const auto w = f->inner_min(c, sigma, 1e-12, 20000);
      CHECK(phi(w) <= best + 1e-9);
      CHECK(phi(w) <= phi(c));
    }
  }
}

TEST_CASE("quadratic closed-form inner_min is optimal along the segment") {
  const auto m = ModelDescriptor::vector(4);
  const auto f = make_functional("quadratic", m);
  Engine e = derive_engine(37, 0);
  const auto c = random_cone_element(m, e, 2.0);
  const double sigma = 0.3;
  const auto w = f->inner_min(c, sigma, 1e-12, 1000);
  // stationarity: the gradient 2(w - t) has norm sigma and points back to c
  const auto grad = *f->gradient(w);
  CHECK(norm_V(grad) == doctest::Approx(sigma).epsilon(1e-12));
}

TEST_CASE("lattice restriction enumerates exhaustively") {
  const auto m = ModelDescriptor::vector(3);
  const auto f = build_lattice_restriction(make_functional("quadratic", m, {{"scale", 1.5}}), 4, 0.5);
  const auto pts = lattice_points(m, 4, 0.5);
  CHECK(pts.size() == 64);
  CHECK(f->eval(FunctionElement(m, {0.5, 0.25, 0})) == kInfinity);
  CHECK(*f->known_min_value() == 0.0);
  const FunctionElement c(m, {0, 0, 1.5});
  const auto w = f->inner_min(c, 0.5, 0, 0);
  double best = kInfinity;
  for (const auto& p : pts) best = std::min(best, f->eval(p) + 0.5 * dist_X(p, c));
  CHECK(f->eval(w) + 0.5 * dist_X(w, c) == best);
}

TEST_CASE("box gradient at interior points is the base gradient") {
  const auto g = ModelDescriptor::grid1d(7, 0.25);
  const auto base = make_functional("dirichlet", g);
  const auto box = build_nonsmooth_box(base, 1.0);
  const FunctionElement u(g, {0.1, 0.2, 0.3, 0.4, 0.3, 0.2, 0.1});
  REQUIRE(box->gradient(u).has_value());
  CHECK(*box->gradient(u) == *base->gradient(u));
}

}
