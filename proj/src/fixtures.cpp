#include "mimocc/fixtures.hpp"

#include <map>
#include <utility>

#include "mimocc/error.hpp"
#include "mimocc/plan_io.hpp"

namespace mimocc {

BaselineMisoPlan build_cyclic_baseline(int users) {
  if (users < 3) {
    throw Error(ErrorCode::insufficient_users, "the cyclic schedule needs at least 3 users");
  }
  BaselineMisoPlan b;
  b.users = users;
  b.caching_gain = 1;
  b.multiplexing = 2;
  b.split_count = 3;
  for (int k = 1; k <= users; ++k) b.packets.push_back({k});

  std::map<std::pair<int, int>, int> next_part;
  auto term = [&](int owner, int packet, int zf) {
    const int q = ++next_part[{owner, packet}];
    return BaselineTerm{owner, {packet}, q, {zf}};
  };
  for (int leader = 1; leader <= users; ++leader) {
    std::vector<int> others;
    for (int step = 1; step < users; ++step) others.push_back((leader - 1 + step) % users + 1);
    const int n = static_cast<int>(others.size());
    for (int i = 0; i < n; ++i) {
      const int partner = others[static_cast<std::size_t>(i)];
      const int extra = others[static_cast<std::size_t>((i + 1) % n)];
      BaselineTransmission tx;
      tx.terms.push_back(term(leader, partner, extra));
      tx.terms.push_back(term(partner, leader, extra));
      tx.terms.push_back(term(extra, leader, partner));
      b.transmissions.push_back(std::move(tx));
    }
  }
  validate_baseline(b);
  return b;
}

FixtureDocuments k6_fixture_documents() {
  const BaselineMisoPlan baseline = build_cyclic_baseline(6);
  const DeliveryPlan plan = elevate_baseline(baseline, 2);
  return {export_baseline(baseline), export_plan(plan),
          placement_to_json(plan.placement).dump(1) + "\n"};
}

void write_fixtures(const std::string& directory) {
  const auto docs = k6_fixture_documents();
  write_text_file(directory + "/k6_baseline.json", docs.baseline);
  write_text_file(directory + "/k6_elevated_plan.json", docs.plan);
  write_text_file(directory + "/k6_placement.json", docs.placement);
}

}  // namespace mimocc
