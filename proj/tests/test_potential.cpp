#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bnmap/potential.hpp"
#include "bnmap/rng.hpp"

using namespace bnmap;

namespace {

Potential random_potential(Rng& rng, std::vector<VarId> scope, std::vector<int> cards, double zero_prob = 0.0) {
  std::size_t n = 1;
  for (int c : cards) n *= c;
  std::vector<double> v(n);
  for (double& x : v) x = rng.bernoulli(zero_prob) ? 0.0 : rng.uniform() + 0.01;
  return Potential::from_linear(std::move(scope), std::move(cards), v);
}

// Value of p at an assignment given as a map from var id to state.
double value_at(const Potential& p, const Instantiation& x) { return p.at(p.index_of(x)); }

}  // namespace

TEST_CASE("layout puts the last scope variable fastest") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6};
  Potential p = Potential::from_linear({7, 3}, {2, 3}, v);
  CHECK(p.size() == 6);
  const std::vector<State> s{1, 0};
  CHECK(p.index_of(s) == 3);
  CHECK(p.at(5) == doctest::Approx(6));
  CHECK(p.states_of(4) == std::vector<State>{1, 1});
  CHECK(p.position(3) == 1);
  CHECK(p.position(99) == -1);
  CHECK(p.card_of(3) == 3);
}

TEST_CASE("zero is stored as negative infinity") {
  const std::vector<double> v{0.0, 0.5};
  Potential p = Potential::from_linear({0}, {2}, v);
  CHECK(std::isinf(p.log_at(0)));
  CHECK(p.log_at(0) < 0);
  CHECK(p.at(0) == 0.0);
}

TEST_CASE("multiply matches pointwise products") {
  Rng rng(11);
  Potential a = random_potential(rng, {0, 1}, {2, 3});
  Potential b = random_potential(rng, {2, 1}, {2, 3});
  Potential c = multiply(a, b);
  CHECK(c.scope() == std::vector<VarId>{0, 1, 2});
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    auto st = c.states_of(cell);
    Instantiation x;
    for (std::size_t i = 0; i < st.size(); ++i) x.set(c.scope()[i], st[i]);
    CHECK(c.at(cell) == doctest::Approx(value_at(a, x) * value_at(b, x)).epsilon(1e-12));
  }
}

TEST_CASE("multiplying by the scalar one is the identity") {
  Rng rng(3);
  Potential a = random_potential(rng, {4, 2}, {3, 2});
  Potential c = multiply(Potential(), a);
  CHECK(c.scope() == a.scope());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(c.log_at(i) == a.log_at(i));
}

TEST_CASE("sum_out matches explicit summation") {
  Rng rng(5);
  Potential a = random_potential(rng, {0, 1, 2}, {2, 3, 2}, 0.2);
  const std::vector<VarId> drop{1};
  Potential s = sum_out(a, drop);
  CHECK(s.scope() == std::vector<VarId>{0, 2});
  for (State x0 = 0; x0 < 2; ++x0)
    for (State x2 = 0; x2 < 2; ++x2) {
      double total = 0;
      for (State x1 = 0; x1 < 3; ++x1) {
        const std::vector<State> st{x0, x1, x2};
        total += a.at(a.index_of(st));
      }
      const std::vector<State> out{x0, x2};
      CHECK(s.at(s.index_of(out)) == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("sum_out over everything gives the total") {
  Rng rng(9);
  Potential a = random_potential(rng, {0, 1}, {4, 3});
  double total = 0;
  for (double x : a.linear_values()) total += x;
  const std::vector<VarId> all{0, 1};
  CHECK(std::exp(sum_out(a, all).log_scalar()) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("sum_out of an all-zero slice stays zero") {
  const std::vector<double> v{0, 0, 0.3, 0.2};
  Potential a = Potential::from_linear({0, 1}, {2, 2}, v);
  const std::vector<VarId> drop{1};
  Potential s = sum_out(a, drop);
  CHECK(s.at(0) == 0.0);
  CHECK(s.at(1) == doctest::Approx(0.5));
}

TEST_CASE("maximize_out returns maxima and witnesses") {
  Rng rng(21);
  Potential a = random_potential(rng, {3, 1, 2}, {2, 3, 2});
  const std::vector<VarId> drop{2, 1};
  MaxOutResult m = maximize_out(a, drop);
  CHECK(m.eliminated == std::vector<VarId>{1, 2});
  CHECK(m.potential.scope() == std::vector<VarId>{3});
  for (State x3 = 0; x3 < 2; ++x3) {
    double best = -1;
    std::vector<State> arg;
    for (State x1 = 0; x1 < 3; ++x1)
      for (State x2 = 0; x2 < 2; ++x2) {
        const std::vector<State> st{x3, x1, x2};
        const double v = a.at(a.index_of(st));
        if (v > best) {
          best = v;
          arg = {x1, x2};
        }
      }
    CHECK(m.potential.at(x3) == doctest::Approx(best));
    auto w = m.argmax(x3);
    CHECK(std::vector<State>(w.begin(), w.end()) == arg);
  }
}

TEST_CASE("maximize_out ties go to the smallest assignment in id order") {
  // Scope (5, 2): every cell equal, so the witness must be all zeros, and
  // with a tie only on var 2 = {1, 0} for var 5 = 1 the smaller one wins.
  const std::vector<double> v{0.5, 0.5, 0.5, 0.5};
  const std::vector<VarId> drop{5, 2};
  MaxOutResult m = maximize_out(Potential::from_linear({5, 2}, {2, 2}, v), drop);
  CHECK(m.eliminated == std::vector<VarId>{2, 5});
  auto w = m.argmax(0);
  CHECK(std::vector<State>(w.begin(), w.end()) == std::vector<State>{0, 0});

  const std::vector<double> v2{0.1, 0.9, 0.9, 0.1};  // (5,2): (0,1) and (1,0) tie
  MaxOutResult m2 = maximize_out(Potential::from_linear({5, 2}, {2, 2}, v2), drop);
  auto w2 = m2.argmax(0);
  // In id order (2, 5): candidates (1,0) and (0,1); smallest is (0,1).
  CHECK(std::vector<State>(w2.begin(), w2.end()) == std::vector<State>{0, 1});
}

TEST_CASE("reduce_by_evidence zeros incompatible cells only") {
  Rng rng(2);
  Potential a = random_potential(rng, {0, 1}, {2, 3});
  Instantiation e;
  e.set(1, 2);
  e.set(9, 0);  // outside the scope, ignored
  Potential r = reduce_by_evidence(a, e);
  CHECK(r.scope() == a.scope());
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a.states_of(c)[1] == 2)
      CHECK(r.log_at(c) == a.log_at(c));
    else
      CHECK(r.at(c) == 0.0);
  }
}

TEST_CASE("marginalize_onto reorders to the requested scope") {
  Rng rng(8);
  Potential a = random_potential(rng, {0, 1, 2}, {2, 3, 2});
  const std::vector<VarId> keep{2, 0};
  Potential m = marginalize_onto(a, keep);
  CHECK(m.scope() == keep);
  const std::vector<VarId> drop{1};
  Potential s = sum_out(a, drop);  // scope (0, 2)
  for (State x0 = 0; x0 < 2; ++x0)
    for (State x2 = 0; x2 < 2; ++x2) {
      const std::vector<State> st_m{x2, x0}, st_s{x0, x2};
      CHECK(m.at(m.index_of(st_m)) == doctest::Approx(s.at(s.index_of(st_s))));
    }
}

TEST_CASE("log_add handles infinities") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_add(ninf, ninf) == ninf);
  CHECK(log_add(ninf, 0.0) == 0.0);
  CHECK(log_add(std::log(0.25), std::log(0.5)) == doctest::Approx(std::log(0.75)));
}

TEST_CASE("instantiation basics") {
  Instantiation x(3);
  CHECK(x.empty());
  x.set(5, 1);
  CHECK(x.universe() == 6);
  CHECK(x.has(5));
  CHECK(!x.has(2));
  CHECK(x[2] == Instantiation::kUnset);
  Instantiation y;
  y.set(5, 1);
  y.set(0, 0);
  CHECK(x.compatible(y));
  Instantiation z = x.merged(y);
  CHECK(z.vars() == std::vector<VarId>{0, 5});
  y.set(5, 0);
  CHECK(!x.compatible(y));
  x.unset(5);
  CHECK(x.count() == 0);
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(42), b(42), c = Rng::stream(42, 1);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(Rng(42).next() != c.next());
  Rng d(1);
  for (int i = 0; i < 1000; ++i) {
    const auto k = d.below(7);
    CHECK(k < 7);
    const double u = d.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
