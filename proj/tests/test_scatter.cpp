#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holoscreen/scatter.hpp"
#include "holoscreen/serialize.hpp"
#include "oracles.hpp"

using namespace holo;
using namespace holo::scatter;

namespace {

std::vector<int> spins_of(Eigen::Index idx, std::size_t n) {
  std::vector<int> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = ((idx >> (n - 1 - j)) & 1) ? -1 : 1;
  return s;
}

}  // namespace

TEST_SUITE("scatter") {
  TEST_CASE("single qubit phases") {
    const auto spec = screen::build_interaction(1, {1.0}, 2.0, 1.5);
    const auto s = from_interaction(spec, screen::Party::A, 0.25);
    CHECK(s.qubits() == 1);
    CHECK(s.is_diagonal());
    const double phase = 2.0 * 1.5 * 0.25;
    CHECK(std::abs(s.diagonal()(0) - std::polar(1.0, -phase)) < 1e-15);
    CHECK(std::abs(s.diagonal()(1) - std::polar(1.0, phase)) < 1e-15);
    REQUIRE(s.factors().size() == 1);
    CHECK((s.factors()[0] - s.dense()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(s.basis_tag() == "diagonal:A");
  }

  TEST_CASE("diagonal matches the eigenvalue table") {
    CounterRng rng(1);
    for (std::size_t n = 1; n <= 6; ++n) {
      std::vector<double> w(n);
      double total = 0.0;
      for (auto& v : w) total += v = rng.uniform(0.1, 1.0);
      for (auto& v : w) v /= total;
      const auto spec = screen::build_interaction(n, w, 1.0 + rng.uniform(), 0.5 + rng.uniform());
      const double tau = rng.uniform(0.0, 3.0);
      const auto s = from_interaction(spec, screen::Party::B, tau);
      for (Eigen::Index i = 0; i < s.diagonal().size(); ++i) {
        const auto bits = spins_of(i, n);
        const double e = screen::eigenvalue(spec, screen::Party::B, bits);
        CHECK(std::abs(s.diagonal()(i) - std::polar(1.0, -e * tau)) < 1e-12);
      }
      auto kron = s.factors()[0];
      for (std::size_t j = 1; j < n; ++j) kron = qcore::kron(kron, s.factors()[j]);
      CHECK((kron - s.dense()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(s.unitarity_deviation() < 1e-14);
    }
  }

  TEST_CASE("default tau is one tick period") {
    const auto spec = screen::build_interaction(2, {0.5, 0.5}, 1.0, 2.0);
    const auto a = from_interaction(spec, screen::Party::A);
    const auto b = from_interaction(spec, screen::Party::A, tick_period(2.0));
    CHECK((a.diagonal() - b.diagonal()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("beta to zero gives the identity") {
    screen::InteractionSpec spec;
    spec.n = 3;
    spec.alpha = {std::vector<double>{0.2, 0.3, 0.5}, std::vector<double>{0.2, 0.3, 0.5}};
    spec.beta = {1e-300, 0.0};
    spec.temperature = 1.0;
    for (auto k : {screen::Party::A, screen::Party::B}) {
      const auto s = from_interaction(spec, k, 1.0);
      CHECK((s.dense() - qcore::CMatrixd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  TEST_CASE("apply and round trip") {
    CounterRng rng(2);
    const auto spec = screen::build_interaction(3, {0.2, 0.3, 0.5}, 1.0, 1.0);
    const auto s = from_interaction(spec, screen::Party::A, 0.7);
    for (int t = 0; t < 10; ++t) {
      const qcore::StateVectord out(oracle::random_state(rng, 8));
      const auto in = apply(s, out);
      CHECK(std::abs(in.amplitudes().norm() - 1.0) < 1e-12);
      CHECK((in.amplitudes() - s.dense() * out.amplitudes()).cwiseAbs().maxCoeff() < 1e-14);
      const auto back = apply(s.adjoint(), in);
      CHECK((back.amplitudes() - out.amplitudes()).cwiseAbs().maxCoeff() < 1e-14);
    }
    CHECK_THROWS_AS(apply(s, qcore::StateVectord::basis(4, 0)), DimensionMismatch);
  }

  TEST_CASE("axis change maps eigenstates") {
    CounterRng rng(3);
    for (int t = 0; t < 20; ++t) {
      const Eigen::Vector3d a = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
      const Eigen::Vector3d b = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
      const auto u = axis_change(a, b);
      CHECK(qcore::unitary_deviation(u) < 1e-12);
      const qcore::CVectord image = u * screen::qubit_state(a);
      CHECK(std::abs(std::abs(image.dot(screen::qubit_state(b))) - 1.0) < 1e-12);
    }
  }

  TEST_CASE("conjugation into a tilted basis preserves the spectrum") {
    const auto spec = screen::build_interaction(3, {0.2, 0.3, 0.5}, 1.0, 1.0);
    const auto s = from_interaction(spec, screen::Party::A, 1.3);
    const auto u = basis_change_unitary(screen::LocalBasis::computational(3), screen::LocalBasis::tilted(3, 0.9));
    CHECK(qcore::unitary_deviation(u) < 1e-12);
    const auto c = conjugate(s, u, "tilted:0.9");
    CHECK_FALSE(c.is_diagonal());
    CHECK(c.basis_tag() == "tilted:0.9");
    CHECK(c.unitarity_deviation() < 1e-12);
    Eigen::ComplexEigenSolver<qcore::CMatrixd> es(c.dense());
    std::vector<double> got, want;
    for (Eigen::Index i = 0; i < 8; ++i) {
      got.push_back(std::arg(es.eigenvalues()(i)));
      want.push_back(std::arg(s.diagonal()(i)));
    }
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
    CHECK_THROWS_AS(conjugate(s, qcore::CMatrixd(qcore::CMatrixd::Identity(4, 4)), "x"), DimensionMismatch);
    CHECK_THROWS_AS(c.diagonal(), ValidationError);
  }

  TEST_CASE("dense construction checks unitarity") {
    qcore::CMatrixd m = qcore::CMatrixd::Identity(4, 4);
    CHECK(SMatrixd::from_dense(m, "id").qubits() == 2);
    m(1, 1) = 1.01;
    CHECK_THROWS_AS(SMatrixd::from_dense(m, "bad"), NonUnitary);
    CHECK_THROWS_AS(SMatrixd::from_dense(qcore::CMatrixd::Identity(3, 3), "odd"), DimensionMismatch);
  }

  TEST_CASE("dense form capacity") {
    const auto spec = screen::build_interaction(11, std::vector<double>(11, 1.0 / 11), 1.0, 1.0);
    const auto s = from_interaction(spec, screen::Party::A, 1.0);
    CHECK(s.diagonal().size() == 2048);
    CHECK_THROWS_AS(s.dense(), CapacityExceeded);
  }

  TEST_CASE("json form") {
    const auto spec = screen::build_interaction(1, {1.0}, 1.0, 1.0);
    const auto j = io::to_json(from_interaction(spec, screen::Party::A, std::numbers::pi / 2));
    CHECK(j["dim"] == 2);
    CHECK(j["basis"] == "diagonal:A");
    CHECK(std::abs(j["entries"][0][0][1].get<double>() + 1.0) < 1e-15);
    CHECK(std::abs(j["entries"][1][1][1].get<double>() - 1.0) < 1e-15);
    CHECK(j["entries"][0][1][0] == 0.0);
  }
}
