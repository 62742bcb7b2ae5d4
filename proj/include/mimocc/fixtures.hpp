#pragma once

// Low-subpacketization baseline for t = 1, eta = 2 and the K = 6 documents
// shipped under fixtures/.

#include <string>

#include "mimocc/scheme.hpp"

namespace mimocc {

// Each file is split into K packets (user k caches packet {k}) of three
// parts. Leader l = 1..K runs K - 1 transmissions; in the i-th one the
// partner j is the i-th user after l and the extra user e the (i+1)-th,
// cyclically over [K] \ {l}:
//   W_j(l) w_e + W_l(j) w_e + W_l(e) w_j
// Parts are numbered per (user, packet) in delivery order.
BaselineMisoPlan build_cyclic_baseline(int users);

struct FixtureDocuments {
  std::string baseline;   // k6_baseline.json
  std::string plan;       // k6_elevated_plan.json (G = 2)
  std::string placement;  // k6_placement.json
};

FixtureDocuments k6_fixture_documents();

// Writes the three documents into `directory`, which must exist.
void write_fixtures(const std::string& directory);

}  // namespace mimocc
