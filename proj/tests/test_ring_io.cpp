#include <gtest/gtest.h>

#include <filesystem>

#include "steenweb/ring_builders.hpp"
#include "steenweb/ring_io.hpp"
#include "steenweb/suites.hpp"

using namespace steenweb;

namespace {

json dump(const AnyAlgebra& A)
{
    return std::visit([](const auto& R) { return ring_to_json(R); }, A);
}

Errc code_of(const std::string& text)
{
    try {
        ring_from_string(text);
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::invariant_breach;
}

} // namespace

TEST(RingIo, RoundTripsBuilders)
{
    for (const auto& e : suites::corpus()) {
        const json j = dump(e.ring);
        EXPECT_EQ(dump(ring_from_string(j.dump())), j) << e.file;
    }
}

TEST(RingIo, ShippedCorpusMatchesBuilders)
{
    const auto shipped = suites::load_corpus(STEENWEB_DATA_DIR);
    const auto built = suites::corpus();
    ASSERT_EQ(shipped.size(), built.size());
    for (std::size_t i = 0; i < built.size(); ++i) {
        EXPECT_EQ(shipped[i].file, built[i].file);
        EXPECT_EQ(dump(shipped[i].ring), dump(built[i].ring)) << built[i].file;
        EXPECT_TRUE(std::visit([](const auto& A) { return validate(A).ok(); }, shipped[i].ring)) << built[i].file;
    }
}

TEST(RingIo, ContractFileNames)
{
    namespace fs = std::filesystem;
    for (const char* f : {"cp6_z2.json", "s3xhp2_q.json", "hp4_z2.json", "m6g2_q.json", "web/case3_n32_r10.json"})
        EXPECT_TRUE(fs::exists(fs::path(STEENWEB_DATA_DIR) / f)) << f;
}

TEST(RingIo, RationalCoefficients)
{
    const auto A = ring_from_string(R"({"n": 2, "field": "Q", "dims": [1, 0, 1], "poincare": true,
        "products": [{"i": 0, "a": 0, "j": 0, "b": 0, "coords": [1]},
                     {"i": 0, "a": 0, "j": 2, "b": 0, "coords": ["3/6"]},
                     {"i": 2, "a": 0, "j": 0, "b": 0, "coords": ["1/2"]}]})");
    const auto& Q = std::get<QAlgebra>(A);
    EXPECT_EQ(Q.product(0, 0, 2, 0), std::vector<Rational>{Rational(1, 2)});
    EXPECT_EQ(ring_to_json(Q)["products"][1]["coords"][0], "1/2");
}

TEST(RingIo, ParseErrorsCarryPosition)
{
    try {
        ring_from_string("{\"n\": 2, \"field\": }");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), Errc::parse_error);
        EXPECT_GT(e.position(), 0u);
    }
}

TEST(RingIo, SchemaErrors)
{
    EXPECT_EQ(code_of("[]"), Errc::parse_error);
    EXPECT_EQ(code_of(R"({"n": 0, "dims": [1], "products": []})"), Errc::parse_error);
    EXPECT_EQ(code_of(R"({"n": 0, "field": {"p": 4}, "dims": [1], "products": []})"), Errc::parse_error);
    EXPECT_EQ(code_of(R"({"n": 0, "field": "R", "dims": [1], "products": []})"), Errc::parse_error);
    EXPECT_EQ(code_of(R"({"n": 1, "field": "Q", "dims": [1], "products": []})"), Errc::parse_error);
    EXPECT_EQ(code_of(R"({"n": 0, "field": "Q", "dims": [1],
        "products": [{"i": 0, "a": 0, "j": 0, "b": 0, "coords": ["x/2"]}]})"),
              Errc::parse_error);
}

TEST(RingIo, CorruptedFileLoadsButFailsValidation)
{
    const auto A = load_ring(std::string(STEENWEB_DATA_DIR) + "/invalid/s3xs5_q_bad_sign.json");
    const auto r = validate(std::get<QAlgebra>(A));
    EXPECT_TRUE(r.failed("graded-commutativity"));
}
