#include <doctest.h>

#include "nfty/config.hpp"
#include "nfty/errors.hpp"

using namespace nfty;

TEST_CASE("link transmission time") {
  LinkModel link;
  link.capacity_bps = 10e9;
  CHECK(link.transmission_ns(1250) == 1000);  // 1250B at 10Gbps
  CHECK(link.transmission_ns(64) == 51);
}

TEST_CASE("validation names the offending field") {
  ScenarioConfig sc;
  sc.link.capacity_bps = 0;
  CHECK_THROWS_WITH_AS(sc.validate(), "link.capacity_bps must be positive",
                       ConfigError);

  ScenarioConfig sc2;
  sc2.nf.freq_levels = {0.5, 0.4, 1.0};
  CHECK_THROWS_AS(sc2.validate(), ConfigError);

  ScenarioConfig sc3;
  sc3.nf.governor.down_threshold = 0.95;
  CHECK_THROWS_AS(sc3.validate(), ConfigError);

  ScenarioConfig sc4;
  sc4.router.forward_ns = 60'000;  // above icmp_processing_ns
  CHECK_THROWS_AS(sc4.validate(), ConfigError);
}

TEST_CASE("freq levels must end at full speed") {
  NfConfig nf;
  nf.freq_levels = {0.4, 0.8};
  CHECK_THROWS_AS(nf.validate(), ConfigError);
}

TEST_CASE("countermeasure parameter validation") {
  CHECK_THROWS_AS(validate_countermeasure(CmRateShape{1.5, 1}), ConfigError);
  CHECK_THROWS_AS(validate_countermeasure(CmRateShape{0.2, 0}), ConfigError);
  CHECK_NOTHROW(validate_countermeasure(CmRateShape{0.2, 1}));
  CHECK_THROWS_AS(validate_countermeasure(CmUnderclock{0}), ConfigError);
}
