#include <doctest.h>

#include <vector>

#include "sosarch/error.hpp"
#include "sosarch/genome.hpp"
#include "sosarch/rng.hpp"

using namespace sosarch;

TEST_CASE("layout sizes") {
  CHECK(GenomeLayout(3).total_bits() == 6);
  CHECK(GenomeLayout(4).total_bits() == 10);
  CHECK(GenomeLayout(22).total_bits() == 253);
  CHECK(GenomeLayout(1).pair_count() == 0);
  CHECK(GenomeLayout(22).pair_count() == 231);
}

TEST_CASE("interface bit positions") {
  const GenomeLayout n4(4);
  CHECK(n4.interface_bit_index(1, 2) == 4);
  CHECK(n4.interface_bit_index(2, 3) == 7);
  CHECK(n4.interface_bit_index(3, 4) == 9);
  CHECK(GenomeLayout(22).interface_bit_index(21, 22) == 252);

  CHECK_THROWS_AS(n4.interface_bit_index(2, 2), IndexError);
  CHECK_THROWS_AS(n4.interface_bit_index(3, 2), IndexError);
  CHECK_THROWS_AS(n4.interface_bit_index(0, 2), IndexError);
  CHECK_THROWS_AS(n4.interface_bit_index(1, 5), IndexError);
}

TEST_CASE("pair ordering is a bijection onto the interface range") {
  for (std::size_t n = 1; n <= 30; ++n) {
    const GenomeLayout L(n);
    std::vector<int> hits(L.total_bits(), 0);
    std::size_t expected = n;
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t k = j + 1; k <= n; ++k) {
        const std::size_t pos = L.interface_bit_index(j, k);
        REQUIRE(pos == expected);  // (1,2),(1,3),...,(n-1,n)
        ++expected;
        ++hits[pos];
        const auto [a, b] = L.pair_at(pos);
        REQUIRE(a == j);
        REQUIRE(b == k);
      }
    }
    for (std::size_t p = 0; p < n; ++p) CHECK(hits[p] == 0);
    for (std::size_t p = n; p < L.total_bits(); ++p) CHECK(hits[p] == 1);
  }
}

TEST_CASE("string form") {
  const GenomeLayout L(3);
  const Genome g = genome_from_string(L, "101010");
  CHECK(g.system(1));
  CHECK_FALSE(g.system(2));
  CHECK(g.system(3));
  CHECK_FALSE(g.interface(1, 2));
  CHECK(g.interface(1, 3));
  CHECK_FALSE(g.interface(2, 3));
  CHECK(genome_to_string(g) == "101010");

  const Genome h = genome_from_string(L, "101011");
  CHECK(h.interface(1, 3));
  CHECK(h.interface(2, 3));
  CHECK(genome_to_string(h) == "101011");

  CHECK_THROWS_AS(genome_from_string(L, "10"), FormatError);
  CHECK_THROWS_AS(genome_from_string(L, "10101x"), FormatError);
  CHECK_THROWS_AS(genome_from_string(L, "1010101"), FormatError);
}

TEST_CASE("string round-trip on random genomes") {
  Rng rng(5);
  for (std::size_t n : {1, 2, 3, 7, 11, 12, 22, 40}) {
    const GenomeLayout L(n);
    for (int t = 0; t < 50; ++t) {
      Genome g(L);
      for (std::size_t p = 0; p < L.total_bits(); ++p)
        if (rng.coin()) g.set(p);
      const Genome back = genome_from_string(L, genome_to_string(g));
      REQUIRE(back == g);
      REQUIRE(back.count() == g.count());
    }
  }
}

TEST_CASE("contributions") {
  const GenomeLayout L(3);
  Genome ones(L);
  for (std::size_t p = 0; p < L.total_bits(); ++p) ones.set(p);
  CHECK(contributions(ones).system == 1.0);
  CHECK(contributions(ones).interface == 1.0);

  const Genome zeros(L);
  CHECK(contributions(zeros).system == 0.0);
  CHECK(contributions(zeros).interface == 0.0);

  const Contributions c = contributions(genome_from_string(L, "101010"));
  CHECK(c.system == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c.interface == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // relabelling systems (same counts) leaves contributions unchanged
  const Contributions d = contributions(genome_from_string(L, "011100"));
  CHECK(d.system == c.system);
  CHECK(d.interface == c.interface);

  Genome single(GenomeLayout(1));
  single.set(0);
  CHECK(contributions(single).system == 1.0);
  CHECK(contributions(single).interface == 0.0);
}

TEST_CASE("difference set") {
  const GenomeLayout L(3);
  const Genome a = genome_from_string(L, "000111");
  const Genome b = genome_from_string(L, "111000");
  CHECK(difference_set(a, b) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  CHECK(difference_set(a, a).empty());
  const Genome c = genome_from_string(L, "010110");
  CHECK(difference_set(a, c) == std::vector<std::size_t>{1, 5});
}

TEST_CASE("flip and set") {
  Genome g(GenomeLayout(12));
  g.set(65);
  CHECK(g.test(65));
  g.flip(65);
  CHECK_FALSE(g.test(65));
  g.set(3, true);
  g.set(3, false);
  CHECK(g.count() == 0);
}
