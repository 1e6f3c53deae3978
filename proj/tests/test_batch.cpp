#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egsim/batch.hpp"

using namespace egsim;

TEST_CASE("generators only produce validated instances") {
  GenKnobs knobs;
  for (int i = 0; i < 50; ++i) {
    Rng rng(mix_seed(90001, i));
    CHECK(validate(random_oceg(rng, knobs, 1)).empty());
    CHECK(validate(random_oceg(rng, knobs, 2)).empty());
    CHECK(validate(random_oca(rng, knobs, false)).empty());
    CHECK(validate(random_oca(rng, knobs, true)).empty());
    CHECK(validate(random_vass(rng, knobs, 2)).empty());
  }
}

TEST_CASE("zero-count batch gives an empty report") {
  BatchSpec spec;
  spec.operation = "energy-to-sim";
  spec.instances = 0;
  BatchReport rep = run_batch(spec);
  CHECK(rep.rows.empty());
  CHECK(rep.passed());
  CHECK(rep.definite_rate() == 1.0);
}

TEST_CASE("same seed twice gives byte-identical reports") {
  BatchSpec spec;
  spec.operation = "energy-to-sim";
  spec.seed = 42;
  spec.instances = 6;
  std::string first = run_batch(spec).serialize();
  std::string second = run_batch(spec).serialize();
  CHECK(first == second);
  CHECK(first.find("\"disagree\": 0") != std::string::npos);
}

TEST_CASE("small campaigns of every operation stay clean") {
  for (const char* op : {"energy-to-sim", "sim-to-energy", "round-trip", "refine"}) {
    BatchSpec spec;
    spec.operation = op;
    spec.seed = 7;
    spec.instances = 8;
    BatchReport rep = run_batch(spec);
    INFO(op);
    CHECK(rep.disagree == 0);
    CHECK(rep.errors == 0);
    CHECK_FALSE(rep.serialize().empty());
  }
}

TEST_CASE("unknown operations are rejected") {
  BatchSpec spec;
  spec.operation = "frobnicate";
  CHECK_THROWS_AS(run_batch(spec), Error);
}

TEST_CASE("disagreements and errors drive the pass signal") {
  BatchReport rep;
  BatchRow ok;
  ok.agreement = Agreement::Agree;
  rep.add(ok);
  CHECK(rep.passed());
  BatchRow bad;
  bad.agreement = Agreement::Disagree;
  rep.add(bad);
  CHECK_FALSE(rep.passed());
  CHECK(rep.disagree == 1);
  BatchRow err;
  err.error = "CapacityExceeded";
  rep.add(err);
  CHECK(rep.errors == 1);
}
