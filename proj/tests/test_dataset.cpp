#include <doctest.h>

#include <random>
#include <sstream>

#include "ahprank/dataset.hpp"
#include "ahprank/errors.hpp"

using namespace ahprank;

namespace {

std::size_t scan_freq(const TransactionDB& db, const Itemset& x) {
  std::size_t n = 0;
  for (const auto& t : db.transactions())
    if (x.is_subset_of(t)) ++n;
  return n;
}

TransactionDB random_db(std::mt19937_64& rng, std::size_t n, Item items, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Itemset> txs;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Item> row;
    for (Item i = 0; i < items; ++i)
      if (coin(rng)) row.push_back(i);
    txs.emplace_back(std::move(row));
  }
  return TransactionDB(std::move(txs));
}

}  // namespace

TEST_CASE("itemset keeps items sorted and unique") {
  Itemset x{5, 1, 3, 1};
  CHECK(x.size() == 3);
  CHECK(x.to_string() == "1 3 5");
  CHECK(x.contains(3));
  CHECK_FALSE(x.contains(2));
  CHECK(Itemset{1, 5}.is_subset_of(x));
  CHECK_FALSE(Itemset{1, 2}.is_subset_of(x));
  CHECK(x.united(Itemset{2, 9}) == Itemset{1, 2, 3, 5, 9});
  CHECK(x.minus(Itemset{3}) == Itemset{1, 5});
  CHECK(x.intersects(Itemset{5, 7}));
  CHECK_FALSE(x.intersects(Itemset{0, 7}));
}

TEST_CASE("parse_fimi reads one transaction per line") {
  const auto db = parse_fimi_string("1 2 3\n2 3\n");
  REQUIRE(db.size() == 2);
  CHECK(db[0] == Itemset{1, 2, 3});
  CHECK(db[1] == Itemset{2, 3});
}

TEST_CASE("parse_fimi on empty input gives an empty database") {
  CHECK(parse_fimi_string("").size() == 0);
  CHECK(parse_fimi_string("\n\n  \n").size() == 0);
}

TEST_CASE("parse_fimi collapses duplicate items") {
  const auto db = parse_fimi_string("5 5 7\n");
  REQUIRE(db.size() == 1);
  CHECK(db[0] == Itemset{5, 7});
}

TEST_CASE("parse_fimi accepts CRLF and extra whitespace") {
  const auto db = parse_fimi_string("1 2\r\n\r\n  3\t4 \r\n");
  REQUIRE(db.size() == 2);
  CHECK(db[1] == Itemset{3, 4});
}

TEST_CASE("parse_fimi reports the offending line") {
  try {
    parse_fimi_string("1 2\n3 x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_fimi_string("1 -2\n"), ParseError);
  CHECK_THROWS_AS(parse_fimi_string("1.5\n"), ParseError);
}

TEST_CASE("freq counts containing transactions") {
  const auto db = parse_fimi_string("1 2 3\n2 3\n");
  CHECK(db.freq(Itemset{2, 3}) == 2);
  CHECK(db.freq(Itemset{}) == 2);
  CHECK(db.freq(Itemset{1}) == 1);
  CHECK(db.freq(Itemset{4}) == 0);

  // a=1, b=2, c=3
  const auto abc = parse_fimi_string("1 2\n1 2 3\n1\n2\n3\n");
  CHECK(freq(abc, Itemset{1, 2}) == 2);
}

TEST_CASE("freq agrees with a brute-force scan and is monotone") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const auto db = random_db(rng, 60, 10, 0.35);
    std::uniform_int_distribution<Item> pick(0, 11);
    for (int q = 0; q < 50; ++q) {
      std::vector<Item> big;
      for (int k = 0; k < 4; ++k) big.push_back(pick(rng));
      const Itemset y(big);
      const Itemset x(std::vector<Item>(big.begin(), big.begin() + 2));
      CHECK(db.freq(y) == scan_freq(db, y));
      CHECK(db.freq(x) == scan_freq(db, x));
      CHECK(db.freq(x) >= db.freq(y));
      CHECK(db.freq(y) == db.freq(y));
    }
  }
}
