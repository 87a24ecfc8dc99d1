#include "doctest.h"
#include "ellda/text.hpp"

using namespace ellda;

TEST_CASE("tokenize drops stopwords and stems the rest") {
  StopwordSet stop{"the", "were"};
  auto tokens = tokenize_and_normalize("The farmers were farming.", stop,
                                       porter_stem);
  CHECK(tokens == std::vector<std::string>{"farmer", "farm"});
}

TEST_CASE("tokenize of empty input") {
  CHECK(tokenize_and_normalize("", {}, porter_stem).empty());
}

TEST_CASE("tokenize of non-alphabetic input") {
  CHECK(tokenize_and_normalize("... !!! 123", {}, porter_stem).empty());
}

TEST_CASE("hyphens split tokens") {
  auto tokens = tokenize_and_normalize("agri-food", {}, no_stem);
  CHECK(tokens == std::vector<std::string>{"agri", "food"});
}

TEST_CASE("digits never reach the output") {
  auto tokens = tokenize_and_normalize("room 42 holds 7cats", {}, no_stem);
  CHECK(tokens == std::vector<std::string>{"room", "holds", "cats"});
}

TEST_CASE("porter stemmer matches its published rule tables") {
  // Hand-traced through the rule tables.
  CHECK(porter_stem("farmers") == "farmer");
  CHECK(porter_stem("farming") == "farm");
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("ties") == "ti");
  CHECK(porter_stem("cats") == "cat");
  CHECK(porter_stem("feed") == "feed");
  CHECK(porter_stem("agreed") == "agre");
  CHECK(porter_stem("troubled") == "troubl");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("falling") == "fall");
  CHECK(porter_stem("happiness") == "happi");
  CHECK(porter_stem("relational") == "relat");
  CHECK(porter_stem("conditional") == "condit");
  CHECK(porter_stem("generalization") == "gener");
  CHECK(porter_stem("sky") == "sky");
  CHECK(porter_stem("environment") == "environ");
}

TEST_CASE("short words pass through unchanged") {
  CHECK(porter_stem("is") == "is");
  CHECK(porter_stem("a") == "a");
}

TEST_CASE("tokenize filters stopwords on the surface form, before stemming") {
  // "this" is a stopword; "thi" (its stem) is not checked against the set.
  StopwordSet stop{"this"};
  auto tokens = tokenize_and_normalize("this farming", stop, porter_stem);
  CHECK(tokens == std::vector<std::string>{"farm"});
}
