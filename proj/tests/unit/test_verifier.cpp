#include <doctest.h>

#include "mimocc/error.hpp"
#include "mimocc/fixtures.hpp"
#include "mimocc/verifier.hpp"
#include "support.hpp"

using namespace mimocc;

namespace {

DeliveryPlan k6_plan() { return elevate_baseline(build_cyclic_baseline(6), 2); }

std::size_t term_named(const TransmissionVector& tx, const std::string& name) {
  for (std::size_t i = 0; i < tx.terms.size(); ++i) {
    if (std::holds_alternative<SubpacketId>(tx.terms[i].payload) &&
        to_string(std::get<SubpacketId>(tx.terms[i].payload)) == name) {
      return i;
    }
  }
  FAIL("term " << name << " not found");
  return 0;
}

}  // namespace

TEST_CASE("user 1 stream 1 of the K=6 x(1)") {
  const auto plan = k6_plan();
  const auto& tx = plan.transmissions[0];
  const auto accounts = verify_transmission(tx, plan.placement, plan.demands);
  const auto it = std::find_if(accounts.begin(), accounts.end(),
                               [](const StreamAccount& a) { return a.stream == StreamId{1, 1}; });
  REQUIRE(it != accounts.end());
  CHECK(it->served == std::vector<std::size_t>{term_named(tx, "A_{2}^{1,1}")});
  CHECK(it->zf_suppressed == std::vector<std::size_t>{term_named(tx, "A_{2}^{1,2}")});
  std::vector<std::size_t> cached{term_named(tx, "B_{1}^{1,1}"), term_named(tx, "B_{1}^{1,2}"),
                                  term_named(tx, "C_{1}^{1,1}"), term_named(tx, "C_{1}^{1,2}")};
  std::sort(cached.begin(), cached.end());
  CHECK(it->cache_removed == cached);
  CHECK(it->unresolved.empty());
  CHECK(verify_plan(plan).pass);
}

TEST_CASE("unicast plan K=8, t=1, L=G=2 passes with exact coverage") {
  const auto plan = build_unicast_plan(make_config(8, 1, 2, 2));
  const auto report = verify_plan(plan);
  CHECK(report.pass);
  for (const auto& c : report.coverage) {
    // 7 packets not cached, Q = 1, G = 2.
    CHECK(c.demanded == 14);
    CHECK(c.recovered == 14);
    CHECK(c.duplicates == 0);
    CHECK(c.extraneous == 0);
  }
}

TEST_CASE("removing one zf stream yields one unresolved term") {
  auto plan = k6_plan();
  auto& term = plan.transmissions[0].terms[0];
  const StreamId removed = term.zf_set.front();
  term.zf_set.erase(term.zf_set.begin());
  const auto report = verify_plan(plan);
  CHECK_FALSE(report.pass);
  CHECK(report.unresolved_count() == 1);
  for (const auto& s : report.streams) {
    if (!s.unresolved.empty()) {
      CHECK(s.stream == removed);
      CHECK(s.unresolved == std::vector<std::size_t>{0});
    }
  }
}

TEST_CASE("every single zf mutation flips the verdict") {
  for (const auto& c : testsupport::config_grid(5, 2, 2)) {
    for (const auto& base : {build_unicast_plan(c), build_multicast_plan(c)}) {
      REQUIRE(verify_plan(base).pass);
      // Sample: first and last term of every transmission, every zf element.
      for (std::size_t t = 0; t < base.transmissions.size(); ++t) {
        const auto& terms = base.transmissions[t].terms;
        for (std::size_t i : {std::size_t{0}, terms.size() - 1}) {
          for (std::size_t z = 0; z < terms[i].zf_set.size(); ++z) {
            auto plan = base;
            auto& zf = plan.transmissions[t].terms[i].zf_set;
            zf.erase(zf.begin() + static_cast<std::ptrdiff_t>(z));
            REQUIRE_FALSE(verify_plan(plan).pass);
          }
        }
      }
    }
  }
}

TEST_CASE("dropping a cached subfile flips the verdict") {
  const auto plan = build_unicast_plan(make_config(4, 1, 2, 2));
  auto placement = plan.placement;
  // User 1 forgets W_{1} of file 2, which user 2 requests.
  placement.caches[0].erase(CachedSubfile{2, {1}});
  CHECK_FALSE(verify_plan(plan, placement, plan.demands).pass);
}

TEST_CASE("multicast codeword that cannot be stripped") {
  auto plan = build_multicast_plan(make_config(3, 1, 2, 2));
  auto placement = plan.placement;
  placement.caches[0].clear();
  const auto report = verify_plan(plan, placement, plan.demands);
  CHECK_FALSE(report.pass);
  bool unstrippable = false;
  for (const auto& s : report.streams) unstrippable = unstrippable || !s.unstrippable.empty();
  CHECK(unstrippable);
}

TEST_CASE("duplicated and missing deliveries break coverage") {
  auto plan = build_unicast_plan(make_config(4, 1, 2, 2));
  plan.transmissions.push_back(plan.transmissions.front());
  auto report = verify_plan(plan);
  CHECK_FALSE(report.pass);
  std::size_t dup = 0;
  for (const auto& c : report.coverage) dup += c.duplicates;
  CHECK(dup == 4);

  plan = build_unicast_plan(make_config(4, 1, 2, 2));
  plan.transmissions.pop_back();
  report = verify_plan(plan);
  CHECK_FALSE(report.pass);
}

TEST_CASE("mismatched inputs raise ConfigMismatch") {
  const auto plan = build_unicast_plan(make_config(4, 1, 2, 2));
  auto code = [&](const CachePlacement& p, const std::vector<int>& d) {
    try {
      verify_plan(plan, p, d);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_parameter;
  };
  CHECK(code(build_placement(make_config(5, 1, 2, 2)), {1, 2, 3, 4}) == ErrorCode::config_mismatch);
  CHECK(code(plan.placement, {1, 2, 3}) == ErrorCode::config_mismatch);
  CHECK(code(plan.placement, {1, 2, 3, 7}) == ErrorCode::config_mismatch);
}

TEST_CASE("dof accounting") {
  CHECK(verify_dof_accounting(k6_plan()) == 6);
  CHECK(verify_dof_accounting(build_multicast_plan(make_config(8, 1, 2, 2))) == 4);
  CHECK(verify_dof_accounting(build_unicast_plan(make_config(6, 2, 3, 1))) == 5);
  for (const auto& c : testsupport::config_grid(8, 2, 3)) {
    REQUIRE(verify_dof_accounting(build_unicast_plan(c)) == count_dof(c, DofMode::mimo));
    REQUIRE(verify_dof_accounting(build_multicast_plan(c)) == count_dof(c, DofMode::mimo));
  }
}

TEST_CASE("combinatorial baselines elevate to verified plans") {
  for (int k = 3; k <= 7; ++k) {
    for (int g = 1; g <= 3; ++g) {
      const auto plan = elevate_baseline(build_combinatorial_baseline(k, 1, 2), g);
      REQUIRE(verify_plan(plan).pass);
      REQUIRE(verify_dof_accounting(plan) == g * 1 + 2 * g);
    }
  }
}
