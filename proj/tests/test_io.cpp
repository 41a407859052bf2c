#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace wctlab;
using namespace wctlab::testing;

namespace {

WCTInstance parse(const std::string& text) {
    std::istringstream in(text);
    return read_instance(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const InstanceFormatError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("instance files round-trip exactly") {
    GeneratorConfig cfg;
    cfg.seed = 90210;
    const WCTInstance inst = gen_instance(cfg);

    std::ostringstream out;
    write_instance(inst, out);
    const WCTInstance back = parse(out.str());

    CHECK((back.space.masses() - inst.space.masses()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.part.blocks() == inst.part.blocks());
    CHECK((back.u - inst.u).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.w - inst.w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("17-digit formatting round-trips doubles") {
    for (double v : {1.0 / 3.0, 0.1, 1e-300, 12345.6789012345678, 2.2250738585072014e-308}) {
        const std::string s = fmt17(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(fmt17(std::numeric_limits<double>::infinity()) == "\"inf\"");
}

TEST_CASE("a valid hand-written instance parses") {
    const WCTInstance inst = parse(R"({
        "mu": [0.5, 0.5],
        "blocks": [[1, 2]],
        "u": [[2, 0], [0, 0]],
        "w": [[0, 0], [1, 0]]
    })");
    CHECK(inst.size() == 2);
    CHECK(inst.blocks() == 1);
    CHECK(inst.u[0] == Complex{2, 0});
    CHECK(inst.exp_u2_block[0] == 2.0);
}

TEST_CASE("instance validation reports the first violation with its location") {
    CHECK(error_of("not json at all").find("not valid JSON") != std::string::npos);
    CHECK(error_of(R"({"blocks": [[1]], "u": [[1,0]], "w": [[1,0]]})").find("missing field \"mu\"") !=
          std::string::npos);
    CHECK(error_of(R"({"mu": [1, -2], "blocks": [[1,2]], "u": [[1,0],[1,0]], "w": [[1,0],[1,0]]})")
              .find("mu[2] must be > 0") != std::string::npos);
    CHECK(error_of(R"({"mu": [1, 2], "blocks": [[1],[1,2]], "u": [[1,0],[1,0]], "w": [[1,0],[1,0]]})")
              .find("index 1 appears in more than one block") != std::string::npos);
    CHECK(error_of(R"({"mu": [1, 2], "blocks": [[1]], "u": [[1,0],[1,0]], "w": [[1,0],[1,0]]})")
              .find("index 2 is not covered") != std::string::npos);
    CHECK(error_of(R"({"mu": [1, 2], "blocks": [[1,3]], "u": [[1,0],[1,0]], "w": [[1,0],[1,0]]})")
              .find("outside 1..2") != std::string::npos);
    CHECK(error_of(R"({"mu": [1, 2], "blocks": [[1,2]], "u": [[1,0]], "w": [[1,0],[1,0]]})")
              .find("\"u\" has length 1, expected 2") != std::string::npos);
    CHECK(error_of(R"({"mu": [1, 2], "blocks": [[1,2]], "u": [[1,0],[1]], "w": [[1,0],[1,0]]})")
              .find("u[2] must be a [re, im] pair") != std::string::npos);
    CHECK(error_of(R"({"mu": [1, 2], "blocks": [], "u": [[1,0],[1,0]], "w": [[1,0],[1,0]]})")
              .find("\"blocks\" must be a non-empty array") != std::string::npos);
}

TEST_CASE("record writer emits stable one-line JSON") {
    Record sub;
    sub.field("alpha", 0.5);
    Record rec;
    rec.field("record", "demo")
        .field("count", 3)
        .field("value", 1.0 / 3.0)
        .field("flag", true)
        .field("z", Complex{1.5, -2.0})
        .field("nested", sub)
        .field("list", std::vector<double>{1.0, 0.25});
    CHECK(rec.str() ==
          R"({"record":"demo","count":3,"value":0.33333333333333331,"flag":true,)"
          R"("z":[1.5,-2],"nested":{"alpha":0.5},"list":[1,0.25]})");

    Record esc;
    esc.field("text", "quote\" slash\\ tab\t");
    CHECK(esc.str() == R"({"text":"quote\" slash\\ tab\t"})");
}
