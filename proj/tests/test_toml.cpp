#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "yaf/minitoml.hpp"

using namespace yaf;
using namespace yaf::minitoml;

TEST_CASE("a well-formed document parses with sections, keys, and all scalar kinds") {
  const char* text =
      "# run configuration\n"
      "[scenario]\n"
      "kind = \"bump\"   # trailing comment\n"
      "n = 3\n"
      "amplitude = 0.5\n"
      "big = 1e6\n"
      "negative = -2.5e-3\n"
      "flag = true\n"
      "off = false\n"
      "\n"
      "[monitors]\n"
      "radii = [20.0, 30.0, 45.0]\n"
      "counts = [1, 2, 3]\n"
      "names = [\"a\", \"b\"]\n"
      "empty = []\n"
      "mixed_numeric = [1, 2.5]\n";
  const Document doc = parse(text);
  REQUIRE(doc.sections.size() == 2);
  CHECK(doc.sections[0].name == "scenario");
  CHECK(doc.sections[1].name == "monitors");

  const Section& sc = *doc.find("scenario");
  REQUIRE(sc.find("kind") != nullptr);
  CHECK(sc.find("kind")->kind == Kind::string);
  CHECK(sc.find("kind")->str == "bump");
  CHECK(sc.find("n")->kind == Kind::integer);
  CHECK(sc.find("n")->integer == 3);
  CHECK(sc.find("amplitude")->kind == Kind::floating);
  CHECK(sc.find("amplitude")->floating == 0.5);
  CHECK(sc.find("big")->floating == 1e6);
  CHECK(sc.find("negative")->floating == -2.5e-3);
  CHECK(sc.find("flag")->boolean == true);
  CHECK(sc.find("off")->boolean == false);

  const Section& mon = *doc.find("monitors");
  const Value& radii = *mon.find("radii");
  REQUIRE(radii.kind == Kind::array);
  REQUIRE(radii.items.size() == 3);
  CHECK(radii.items[1].as_double() == 30.0);
  CHECK(mon.find("counts")->items[2].integer == 3);
  CHECK(mon.find("names")->items[0].str == "a");
  CHECK(mon.find("empty")->items.empty());
  // integer elements promote when a float appears in the same array
  const Value& mixed = *mon.find("mixed_numeric");
  CHECK(mixed.items[0].kind == Kind::floating);
  CHECK(mixed.items[0].floating == 1.0);
  CHECK(mixed.items[1].floating == 2.5);

  CHECK(doc.find("absent") == nullptr);
  CHECK(sc.find("absent") == nullptr);
}

TEST_CASE("string escapes decode and unknown escapes are rejected with the line") {
  const Document doc = parse("[s]\npath = \"a\\\\b\"\nmsg = \"x\\n\\\"q\\\"\\ty\"\n");
  CHECK(doc.find("s")->find("path")->str == "a\\b");
  CHECK(doc.find("s")->find("msg")->str == "x\n\"q\"\ty");

  CHECK_THROWS_WITH_AS(parse("[s]\nbad = \"a\\qb\"\n"),
                       doctest::Contains("line 2: unknown escape '\\q'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[s]\nbad = \"no end\n"),
                       doctest::Contains("unterminated string"), ConfigError);
}

TEST_CASE("windows line endings and blank lines are tolerated") {
  const Document doc = parse("[a]\r\nx = 1\r\n\r\n# c\r\ny = 2\r\n");
  CHECK(doc.find("a")->find("x")->integer == 1);
  CHECK(doc.find("a")->find("y")->integer == 2);
}

TEST_CASE("duplicate keys and sections are reported with both line numbers") {
  CHECK_THROWS_WITH_AS(parse("[s]\ndt = 1\ndt = 2\n"),
                       doctest::Contains("line 3: duplicate key 'dt' in [s] (first set at "
                                         "line 2)"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[s]\n[t]\n[s]\n"),
                       doctest::Contains("line 3: duplicate section [s] (first opened at "
                                         "line 1)"),
                       ConfigError);
  // a duplicate section still surfaces duplicate keys across the two blocks
  try {
    parse("[s]\ndt = 1\n[s]\ndt = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.messages().size() == 2);
    CHECK(e.messages()[0].find("duplicate section") != std::string::npos);
    CHECK(e.messages()[1].find("duplicate key 'dt'") != std::string::npos);
  }
}

TEST_CASE("structural errors are all collected in one pass") {
  const char* text =
      "top = 1\n"           // key outside any section
      "[s]\n"
      "x 2\n"               // missing '='
      "y = \n"              // missing value
      "z = 1 2\n"           // trailing junk
      "w = zebra\n"         // unparseable value
      "[]\n"                // empty section name
      "[t\n";               // missing bracket
  try {
    parse(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.messages().size() == 7);
    CHECK(e.messages()[0].find("outside any [section]") != std::string::npos);
    CHECK(e.messages()[1].find("expected '=' after key 'x'") != std::string::npos);
    CHECK(e.messages()[2].find("missing value") != std::string::npos);
    CHECK(e.messages()[3].find("unexpected text after value for key 'z'") != std::string::npos);
    CHECK(e.messages()[4].find("cannot parse value 'zebra'") != std::string::npos);
    CHECK(e.messages()[5].find("section name") != std::string::npos);
    CHECK(e.messages()[6].find("missing ']'") != std::string::npos);
  }
}

TEST_CASE("array errors: heterogeneity, nesting, and unterminated brackets") {
  CHECK_THROWS_WITH_AS(parse("[s]\na = [1, \"x\"]\n"),
                       doctest::Contains("mixed value types in array"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[s]\na = [true, 1]\n"),
                       doctest::Contains("mixed value types in array"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[s]\na = [[1], 2]\n"),
                       doctest::Contains("nested arrays are not supported"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[s]\na = [1, 2\n"), doctest::Contains("unterminated array"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[s]\na = [1 2]\n"),
                       doctest::Contains("expected ',' or ']' in array"), ConfigError);
}

TEST_CASE("numeric edge cases: 64-bit limits and full-precision floats") {
  const Document doc = parse("[s]\nbig = 9223372036854775807\nsmall = -9223372036854775808\n"
                             "pi = 3.1415926535897931\ntiny = 9.9999999999999998e-11\n");
  CHECK(doc.find("s")->find("big")->integer == 9223372036854775807ll);
  CHECK(doc.find("s")->find("small")->integer + 1 == -9223372036854775807ll);
  CHECK(doc.find("s")->find("pi")->floating == 3.1415926535897931);
  CHECK(doc.find("s")->find("tiny")->floating == 9.9999999999999998e-11);
  CHECK_THROWS_WITH_AS(parse("[s]\nhuge = 99999999999999999999\n"),
                       doctest::Contains("does not fit in 64 bits"), ConfigError);
}

TEST_CASE("unreadable files raise IoError") {
  CHECK_THROWS_AS(parse_file("/nonexistent/dir/config.toml"), IoError);
}
