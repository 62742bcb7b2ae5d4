#include <doctest.h>

#include "mimocc/channel.hpp"
#include "mimocc/error.hpp"
#include "mimocc/optimizer.hpp"
#include "support.hpp"

using namespace mimocc;

namespace {

OptProblem problem_for(const NetworkConfig& cfg, const DeliveryPlan& plan, std::size_t tx,
                       std::uint64_t seed, double power) {
  OptProblem p;
  p.mode = plan.mode == PlanMode::multicast ? LinkMode::multicast : LinkMode::unicast;
  p.transmission = plan.transmissions.at(tx);
  p.channels = generate_channel(cfg, seed, 0).users;
  p.power_budget = power;
  return p;
}

}  // namespace

TEST_CASE("single user reaches the strongest eigenmode capacity") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) {
    OptProblem p;
    p.transmission.serving_set = {1};
    p.transmission.terms.push_back({SubpacketId{1, {}, 1, 1}, {}});
    p.channels = {testsupport::random_matrix(rng, 2, 3)};
    p.power_budget = 4.0;
    const auto [u, sigma] = testsupport::power_iteration(p.channels[0]);
    const auto res = optimize_beamformers(p);
    CHECK(res.trace.back() == doctest::Approx(std::log1p(4.0 * sigma * sigma)).epsilon(1e-6));
  }
}

TEST_CASE("optimized beats zero-forcing and the trace never drops") {
  const auto cfg = make_config(4, 1, 2, 2);
  for (const auto& plan : {build_unicast_plan(cfg), build_multicast_plan(cfg)}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto p = problem_for(cfg, plan, seed % plan.transmissions.size(), seed, 10.0);
      const auto zf = design_zf(p.transmission, p.channels, p.mode, p.power_budget);
      const double zf_value = evaluate_objective(zf, p).min_rate;
      const auto res = optimize_beamformers(p);
      CHECK(res.trace.front() == doctest::Approx(zf_value));
      CHECK(res.trace.back() >= zf_value * (1.0 - 1e-12));
      for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] >= res.trace[i - 1]);
      CHECK(res.beamformers.total_power() <= p.power_budget * (1.0 + 1e-9));
      CHECK(res.receive_sinr_decreases == 0);
      CHECK(res.iterations <= res.settings.max_outer);
    }
  }
}

TEST_CASE("more power helps") {
  const auto cfg = make_config(4, 1, 2, 2);
  const auto plan = build_unicast_plan(cfg);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const double low = optimize_beamformers(problem_for(cfg, plan, 0, seed, 1.0)).trace.back();
    const double high = optimize_beamformers(problem_for(cfg, plan, 0, seed, 10.0)).trace.back();
    CHECK(high > low);
  }
}

TEST_CASE("silent beamformers score zero and stay feasible") {
  const auto cfg = make_config(3, 1, 2, 2);
  const auto plan = build_unicast_plan(cfg);
  const auto p = problem_for(cfg, plan, 0, 2, 1.0);
  auto init = design_zf(p.transmission, p.channels, p.mode, 1.0);
  for (auto& w : init.transmit) w.assign(w.size(), 0.0);
  CHECK(evaluate_objective(init, p).min_rate == 0.0);
  const auto res = optimize_beamformers(p, init);
  CHECK(res.trace.back() >= 0.0);
  CHECK(res.beamformers.total_power() <= 1.0 + 1e-9);
}

TEST_CASE("multicast has (t+1) times fewer transmit variables") {
  for (const auto& cfg : testsupport::config_grid(6, 2, 2)) {
    const auto u = build_unicast_plan(cfg);
    const auto m = build_multicast_plan(cfg);
    OptProblem pu;
    pu.transmission = u.transmissions[0];
    OptProblem pm;
    pm.transmission = m.transmissions[0];
    REQUIRE(pu.transmit_variable_count() ==
            static_cast<std::size_t>(cfg.caching_gain + 1) * pm.transmit_variable_count());
  }
}

TEST_CASE("infeasible starts") {
  const auto cfg = make_config(3, 1, 2, 2);
  const auto plan = build_unicast_plan(cfg);
  const auto p = problem_for(cfg, plan, 0, 2, 1.0);
  auto init = design_zf(p.transmission, p.channels, p.mode, 2.0);
  auto code = [&](const BeamformerSet& b) {
    try {
      optimize_beamformers(p, b);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_parameter;
  };
  CHECK(code(init) == ErrorCode::infeasible_init);
  init.transmit.pop_back();
  CHECK(code(init) == ErrorCode::infeasible_init);

  // Five zf constraints in two transmit dimensions.
  OptProblem bad = p;
  bad.channels = generate_channel(make_config(3, 1, 2, 2), 1, 0).users;
  bad.transmission.terms[0].zf_set = {{1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}};
  try {
    optimize_beamformers(bad);
    FAIL("expected InfeasibleInit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::infeasible_init);
  }
}

TEST_CASE("optimizer settings from parameters") {
  ParameterMap m{{"tol", "1e-6"}, {"max_outer", "7"}, {"users", "4"}};
  const auto s = take_optimizer_settings(m);
  CHECK(s.tol == doctest::Approx(1e-6));
  CHECK(s.max_outer == 7);
  CHECK(s.max_inner == 20);
  CHECK(m.size() == 1);
  ParameterMap bad{{"max_inner", "-2"}};
  CHECK_THROWS_AS(take_optimizer_settings(bad), Error);
  ParameterMap junk{{"tol", "abc"}};
  CHECK_THROWS_AS(take_optimizer_settings(junk), Error);
}
