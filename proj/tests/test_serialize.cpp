#include <catch2/catch_amalgamated.hpp>

#include "hermop/generators.hpp"
#include "hermop/serialize.hpp"

using namespace hermop;

TEST_CASE("coefficient tensors round-trip bit-exactly") {
    const CoeffTensor a = random_gs_tensor(12, 1, 0.5, 0.6, 424242);
    const Json j = to_json(a);
    const CoeffTensor back = coeff_tensor_from_json(j);

    REQUIRE(back.size() == a.size());
    CHECK(back.d_left() == a.d_left());
    CHECK(back.trunc_right() == a.trunc_right());
    for (const auto& [key, v] : a.entries())
        CHECK(back.at(key.first, key.second) == v); // identical bits

    // canonical form: re-serialization is byte-identical
    CHECK(dump_canonical(to_json(back)) == dump_canonical(j));
}

TEST_CASE("grid symbols round-trip bit-exactly") {
    const GridSymbol a = projector_symbol(square_grid(-8.0, 8.0, 16));
    const GridSymbol back = grid_symbol_from_json(to_json(a));
    CHECK(back.grid == a.grid);
    REQUIRE(back.values.size() == a.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k)
        CHECK(back.values[k] == a.values[k]);
}

TEST_CASE("factor pair serialization carries the contract fields") {
    const FactorPair pair = factorize_roumieu(mehler_tensor(0.5, 8), 0.5, 0.5);
    const Json j = to_json(pair);
    CHECK(j.at("branch") == "roumieu");
    CHECK(j.at("d0") == 1);
    CHECK(j.at("params").at("r") == 0.5);
    CHECK(coeff_tensor_from_json(j.at("B")).size() == pair.B.size());
    CHECK(coeff_tensor_from_json(j.at("C")).size() == pair.C.size());

    const Json jb = to_json(factorize_beurling(mehler_tensor(0.5, 8), 1.0));
    CHECK(jb.at("branch") == "beurling");
    CHECK(jb.at("params").contains("theta"));
}

TEST_CASE("weight files") {
    const Json j = Json::parse(R"({"d":2,"weights":[[[0,1],2.5]]})");
    const HermiteWeight w = weight_from_json(j);
    CHECK(w.at(MultiIndex{0, 1}) == 2.5);
    CHECK(w.at(MultiIndex{1, 0}) == 2.5); // permutation symmetry by canonicalization
    CHECK(w.at(MultiIndex{3, 3}) == 1.0); // unset defaults to 1

    CHECK_THROWS_AS(
        weight_from_json(Json::parse(R"({"d":2,"weights":[[[0,1],2.5],[[1,0],3.0]]})")),
        ValidationError);
    CHECK_THROWS_AS(
        weight_from_json(Json::parse(R"({"d":1,"weights":[[[0],-1.0]]})")),
        ValidationError);
}

TEST_CASE("decay profile serializes the infinite sentinel") {
    CoeffTensor one = CoeffTensor::square1d(0);
    one.set(MultiIndex{0}, MultiIndex{0}, Complex(1.0, 0.0));
    CHECK(to_json(estimate_decay(one, 0.5)).at("r_hat") == "inf");
    CHECK(to_json(estimate_decay(mehler_tensor(0.5, 8), 0.5)).at("r_hat").is_number());
}

TEST_CASE("malformed inputs raise validation errors") {
    CHECK_THROWS_AS(coeff_tensor_from_json(Json::parse(R"({"d_left":1})")),
                    ValidationError);
    CHECK_THROWS_AS(coeff_tensor_from_json(Json::parse(
                        R"({"d_left":1,"d_right":1,"trunc_left":[2],"trunc_right":[2],
                            "entries":[[[0],[0],1.0]]})")),
                    ValidationError);
    CHECK_THROWS_AS(grid_symbol_from_json(Json::parse(
                        R"({"axis1":{"min":-8.0,"max":8.0,"n":16},
                            "axis2":{"min":-8.0,"max":8.0,"n":16},"values":[[0.0,0.0]]})")),
                    ValidationError);
    CHECK_THROWS_AS(load_json("/nonexistent/path.json"), ValidationError);
}
