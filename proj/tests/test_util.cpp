#include <doctest.h>

#include <array>
#include <set>

#include "slacksim/ooo/pipeline_config.hpp"
#include "slacksim/util/kv_file.hpp"
#include "slacksim/util/prng.hpp"

using namespace slacksim;

TEST_CASE("prng is deterministic and never zero") {
  Prng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != 0);
  }
  CHECK(a.next() != c.next());
  Prng z(0);
  CHECK(z.next() != 0);
}

TEST_CASE("prng uniform bounds") {
  Prng r(5);
  for (int i = 0; i < 100; ++i) CHECK(r.uniform(0) == 0);
  for (int i = 0; i < 1000; ++i) CHECK(r.uniform(6) <= 6);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK_FALSE(r.bernoulli(0.0));
  CHECK(r.bernoulli(1.0));
}

TEST_CASE("prng uniform passes a chi-square test") {
  // 16 bins, 160000 draws: the 0.999 quantile of chi^2 with 15 dof is 37.7.
  Prng r(2024);
  std::array<double, 16> bins{};
  const int n = 160000;
  for (int i = 0; i < n; ++i) bins[r.uniform(15)] += 1.0;
  double chi2 = 0.0;
  for (double o : bins) chi2 += (o - n / 16.0) * (o - n / 16.0) / (n / 16.0);
  CHECK(chi2 < 37.7);
}

TEST_CASE("derived seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(Prng::derive(7, i));
  CHECK(seen.size() == 10000);
  CHECK(Prng::derive(7, 0) != Prng::derive(8, 0));
}

TEST_CASE("key-value files") {
  const auto kv = KeyValueFile::parse("# c\n a = 1 \nb.c = x, y ,z\nflag = true\nr = 0.25\n");
  CHECK(kv.get_uint("a", 0) == 1);
  CHECK(kv.get_list("b.c", {}) == std::vector<std::string>{"x", "y", "z"});
  CHECK(kv.get_bool("flag", false));
  CHECK(kv.get_double("r", 0) == doctest::Approx(0.25));
  CHECK(kv.get_uint("missing", 9) == 9);
  CHECK(kv.unused_keys().empty());
  CHECK_THROWS_AS(KeyValueFile::parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("a = x\n").get_uint("a", 0), ConfigError);
}

TEST_CASE("pipeline config parsing") {
  const auto def = ooo::parse_config("");
  CHECK(def.pipeline == ooo::PipelineConfig{});
  CHECK(def.pipeline.rob_entries == 96);
  CHECK(def.pipeline.fetch_buffer == 24);
  CHECK(def.pipeline.iq_entries == 8);
  CHECK(def.pipeline.total_units() == 5);
  CHECK(def.slack.ways == 4);
  CHECK(def.slack.sets == 16);

  const auto b = ooo::parse_config("rob_entries = 32\nslack.sets = 8\n");
  CHECK(b.pipeline.rob_entries == 32);
  CHECK(b.slack.sets == 8);
  CHECK(ooo::parse_config(ooo::to_text(b.pipeline, b.slack)).pipeline == b.pipeline);

  CHECK_THROWS_AS(ooo::parse_config("rob_entry = 3\n"), ConfigError);
  CHECK_THROWS(ooo::parse_config("issue_width = 9\n"));
  CHECK_THROWS(ooo::parse_config("alu_units = 0\n"));
  CHECK_THROWS(ooo::parse_config("slack.pc_offset_bits = 6\n"));
  CHECK_THROWS(ooo::validate(ooo::SchedulerMode{ooo::RandomDelay{1.5, 8}}));
  CHECK_THROWS(ooo::validate(ooo::SchedulerMode{ooo::RandomDelay{0.5, 0}}));
}
