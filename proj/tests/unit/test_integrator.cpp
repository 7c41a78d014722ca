#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "slwave/errors.hpp"
#include "slwave/integrator.hpp"
#include "slwave/verification.hpp"

using namespace slwave;

TEST_SUITE("integrator") {

TEST_CASE("hht parameters") {
  const HhtParams h(-0.05, 0.1);
  CHECK(h.beta() == doctest::Approx(0.275625).epsilon(1e-15));
  CHECK(h.gamma() == doctest::Approx(0.55).epsilon(1e-15));
  const HhtParams n(0.0, 1.0);
  CHECK(n.beta() == 0.25);
  CHECK(n.gamma() == 0.5);
  CHECK_THROWS_AS(HhtParams(0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(HhtParams(-0.4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(HhtParams(-0.1, 0.0), std::invalid_argument);
  CHECK_NOTHROW(HhtParams(-1.0 / 3.0, 0.1));
}

TEST_CASE("newmark update") {
  const HhtParams h(-0.05, 0.1);
  SystemState s = SystemState::zeros(1);
  s.sigma = {1.0};
  s.sigma_dot = {2.0};
  s.sigma_ddot = {3.0};
  const std::vector<double> acc{4.0};
  const auto [sig, rate] = newmark_update(s, acc, h);
  // exact rational arithmetic: 194841/160000 and 2.355
  CHECK(sig[0] == doctest::Approx(1.21775625).epsilon(1e-15));
  CHECK(rate[0] == doctest::Approx(2.355).epsilon(1e-15));

  for (double alpha : {0.0, -0.1, -1.0 / 3.0}) {
    const HhtParams g(alpha, 0.2);
    SystemState c = SystemState::zeros(1);
    c.sigma_ddot = {5.0};
    const auto [s1, r1] = newmark_update(c, c.sigma_ddot, g);
    CHECK(s1[0] == doctest::Approx(5.0 * 0.04 / 2.0));
    CHECK(r1[0] == doctest::Approx(5.0 * 0.2));
  }
  CHECK_THROWS_AS(newmark_update(s, std::vector<double>{1.0, 2.0}, h), std::invalid_argument);
}

TEST_CASE("boundary acceleration lands on the prescribed value") {
  const HhtParams h(-0.05, 1e-3);
  SystemState s = SystemState::zeros(3);
  CHECK(boundary_acceleration(0.0, 0, s, h) == 0.0);

  s.sigma = {0.0, 0.0, 0.3};
  s.sigma_dot = {0.0, 0.0, -1.2};
  s.sigma_ddot = {0.0, 0.0, 4.0};
  std::vector<double> free_acc(3, 0.0);
  const double predicted = newmark_update(s, free_acc, h).first[2];
  CHECK(boundary_acceleration(predicted, 2, s, h) == doctest::Approx(0.0).epsilon(1e-9));

  const BoundaryDrive drive{0.02, 2.0 * std::acos(-1.0)};
  for (double t : {0.013, 0.25, 0.7771}) {
    std::vector<double> acc(3, 0.0);
    acc[2] = boundary_acceleration(drive.right_value(t), 2, s, h);
    const double landed = newmark_update(s, acc, h).first[2];
    CHECK(std::abs(landed - drive.right_value(t)) < 1e-15);
  }
}

TEST_CASE("drive") {
  const BoundaryDrive d{0.5, 3.0};
  CHECK(d.right_value(0.0) == 0.0);
  CHECK(d.right_value(0.2) == doctest::Approx(0.5 * std::sin(0.6)));
  CHECK(d.right_acceleration(0.2) == doctest::Approx(-4.5 * std::sin(0.6)));
}

TEST_CASE("free norm skips constrained rows") {
  const std::vector<double> r{3.0, 4.0, 100.0};
  const std::vector<DirichletConstraint> c{{2, 0.0}};
  CHECK(free_norm(r, c) == 5.0);
}

TEST_CASE("zero data stays zero") {
  const FeSpace s = build_space(1.0, 8, DegreePolicy::uniform(2));
  for (double b : {0.0, 1.0, 10.0}) {
    const StepSolver solver(s, {1.0, b, 1.5, 1e-8}, HhtParams(-0.05, 0.01), {}, {0.0, 1.0});
    SystemState st = SystemState::zeros(s.n_dofs());
    for (int k = 0; k < 5; ++k) {
      auto [next, rep] = solver.advance(st);
      CHECK(rep.iterations == 1);
      for (double v : next.sigma) CHECK(v == 0.0);
      st = next;
    }
  }
}

TEST_CASE("linear law converges in one iteration") {
  const FeSpace s = build_space(1.0, 20, DegreePolicy::center_graded());
  for (double dt : {1e-4, 1e-2, 0.2}) {
    const StepSolver solver(s, {1.0, 0.0, 1.5, 1e-8}, HhtParams(-0.1, dt), {}, {0.3, 5.0});
    SystemState st = SystemState::zeros(s.n_dofs());
    for (int k = 0; k < 10; ++k) {
      auto [next, rep] = solver.advance(st);
      CHECK(rep.iterations == 1);
      CHECK(next.sigma.front() == 0.0);
      CHECK(std::abs(next.sigma.back() - 0.3 * std::sin(5.0 * next.t)) < 1e-12);
      st = next;
    }
  }
}

TEST_CASE("newton on the manufactured problem") {
  const MaterialParams p{1.0, 1.0, 2.0, 1e-8};
  const SimulationSetup setup =
      mms_setup(p, -0.05, 1e-3, 1.0, 16, DegreePolicy::uniform(2));
  const FeSpace s = build_space(1.0, 16, DegreePolicy::uniform(2));
  const StepSolver solver(s, p, HhtParams(-0.05, 1e-3), setup.newton, setup.drive, setup.forcing);
  SystemState st = SystemState::zeros(s.n_dofs());
  st.sigma_dot = s.interpolate(setup.initial_rate);
  st.sigma_dot.front() = st.sigma_dot.back() = 0.0;
  st.sigma_ddot = solver.initial_acceleration(st);
  int worst = 0;
  for (int k = 0; k < 200; ++k) {
    auto [next, rep] = solver.advance(st);
    worst = std::max(worst, rep.iterations);
    CHECK(rep.final_residual == rep.history.back());
    CHECK(rep.final_residual <= rep.initial_residual);
    st = next;
  }
  CHECK(worst <= 5);
}

TEST_CASE("newton failure is reported") {
  const FeSpace s = build_space(1.0, 8, DegreePolicy::uniform(1));
  NewtonSettings tight;
  tight.tol = 1e-300;
  tight.abs_floor = 0.0;
  tight.roundoff_factor = 0.0;
  tight.k_max = 2;
  const StepSolver solver(s, {1.0, 5.0, 1.5, 1e-8}, HhtParams(-0.05, 0.01), tight, {0.5, 20.0});
  SystemState st = SystemState::zeros(s.n_dofs());
  try {
    for (int k = 0; k < 50; ++k) st = solver.advance(st).first;
    FAIL("expected NewtonDivergedError");
  } catch (const NewtonDivergedError& e) {
    CHECK(e.residual_history().size() == 3);
    CHECK(e.time() > 0.0);
  }
  NewtonSettings bad;
  bad.k_max = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("run_simulation bookkeeping") {
  SimulationSetup setup;
  setup.material = {1.0, 5.0, 1.5, 1e-8};
  setup.n_cells = 40;
  setup.dt = 0.01;
  setup.t_final = 0.25;
  setup.output_interval = 0.1;
  std::vector<double> times;
  const SimulationResult r =
      run_simulation(setup, [&](const FeSpace&, const SystemState& st) { times.push_back(st.t); });
  CHECK(r.report.steps == 25);
  REQUIRE(times.size() == 4);
  CHECK(times[0] == 0.0);
  CHECK(times[1] == doctest::Approx(0.1));
  CHECK(times[2] == doctest::Approx(0.2));
  CHECK(times[3] == doctest::Approx(0.25));
  CHECK(r.final_state.t == doctest::Approx(0.25));
  CHECK(r.report.max_boundary_error < 1e-12);
  CHECK(r.report.max_wave_speed_excess > 0.0);
  CHECK(r.report.min_newton_iterations >= 1);
  CHECK(r.report.max_newton_iterations <= 5);
}

TEST_CASE("loss of hyperbolicity carries the failing time") {
  SimulationSetup setup;
  setup.material = {1.0, 1.0, 2.0, 1e-8};
  setup.n_cells = 10;
  setup.dt = 0.01;
  setup.t_final = 0.05;
  setup.drive = {1e200, 50.0};
  CHECK_THROWS_AS(run_simulation(setup), HyperbolicityError);
}

}
