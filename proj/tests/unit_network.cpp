#include "cdyn/network.hpp"

#include "doctest.h"

using namespace cdyn;

namespace {

std::size_t error_line(std::string_view text) {
  try {
    parse_network(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

} // namespace

TEST_CASE("network grammar") {
  auto net = parse_network("# comment\nX : (Y)(~Z)  # trailing\n\nY : (~X)\nZ : (X + ~Y)\n");
  REQUIRE(net.size() == 3);
  CHECK(net.name(0) == "X");
  CHECK(net.index("Z") == 2);
  CHECK_FALSE(net.find("W"));
  CHECK(net.edges().size() == 5);

  CHECK(net.interaction(0) == Interaction::product);
  CHECK(net.interaction(1) == Interaction::product);
  CHECK(net.interaction(2) == Interaction::sum);
  CHECK(net.group_sizes(0) == std::vector<std::size_t>{1, 1});
  CHECK(net.group_sizes(2) == std::vector<std::size_t>{2});

  // inputs keep expression order, outputs follow target declaration order
  const auto& in = net.inputs(0);
  REQUIRE(in.size() == 2);
  CHECK(net.edge(in[0]).source == 1);
  CHECK(net.edge(in[1]).source == 2);
  CHECK(net.edge(in[1]).sign == Sign::repressing);
  const auto& out = net.outputs(0);
  REQUIRE(out.size() == 2);
  CHECK(net.edge(out[0]).target == 1);
  CHECK(net.edge(out[1]).target == 2);
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    CHECK(net.inputs(net.edge(e).target)[net.input_position(e)] == e);
    CHECK(net.outputs(net.edge(e).source)[net.output_position(e)] == e);
  }
  CHECK(node_state_count(net, 0) == 3);
  CHECK(node_state_count(net, 1) == 3);
}

TEST_CASE("mixed interaction and self loops") {
  auto net = parse_network("A : (A + B)(~C)\nB : (A)\nC : (B)");
  CHECK(net.interaction(0) == Interaction::mixed);
  CHECK(net.group_sizes(0) == std::vector<std::size_t>{2, 1});
  CHECK(net.out_degree(0) == 2);
  CHECK(net.in_degree(0) == 3);
}

TEST_CASE("serialize round trip and fingerprint") {
  const char* text = "X : (Y)(~Z)\nY : (~X)\nZ : (X + ~Y)\n";
  auto net = parse_network(text);
  CHECK(serialize(net) == text);
  auto again = parse_network(serialize(net));
  CHECK(fingerprint(again) == fingerprint(net));
  CHECK(fingerprint(parse_network("X : (~Y)(~Z)\nY : (~X)\nZ : (X + ~Y)\n")) != fingerprint(net));
  // whitespace and comments do not change the fingerprint
  CHECK(fingerprint(parse_network("X:(Y)(~Z)\n# c\nY : ( ~X )\nZ : (X+~Y)")) == fingerprint(net));
  CHECK(hex64(0x1f) == "000000000000001f");
}

TEST_CASE("parse errors carry the line") {
  CHECK(error_line("X : (Y)\nY : (Q)") == 2);
  CHECK(error_line("X : (X)\nX : (X)") == 2);
  CHECK(error_line("X (X)") == 1);
  CHECK(error_line("X : (X)(~X)") == 1);
  CHECK(error_line("X : (X\n") == 1);
  CHECK(error_line("X : ()") == 1);
  CHECK(error_line("X-1 : (X-1)") == 0);  // names are any run of non-delimiter characters
  CHECK(error_line("X : (Y + )") == 1);
  CHECK(error_line("# only a comment\n") != 0);
  CHECK(error_line("") != 0);
  CHECK_THROWS_AS(load_network("/nonexistent/file.net"), std::runtime_error);
}

TEST_CASE("build validates") {
  CHECK_THROWS_AS(RegulatoryNetwork::build({"A"}, {{}}), std::invalid_argument);
  CHECK_THROWS_AS(RegulatoryNetwork::build({"A"}, {{{{1, Sign::activating}}}}), std::invalid_argument);
  CHECK_THROWS_AS(RegulatoryNetwork::build({"A", "B"}, {{{{0, Sign::activating}}}}), std::invalid_argument);
}
