#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hermop/generators.hpp"
#include "hermop/serialize.hpp"

using namespace hermop;
namespace fs = std::filesystem;

namespace {

const std::string kCli = HERMOP_CLI_PATH;

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("hermop_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

} // namespace

TEST_CASE("generate writes the documented generators") {
    SECTION("mehler: entry (3,3) = e^{-3.5}") {
        REQUIRE(run("generate --kind mehler --tau 0.5 --N 64 --output " +
                    path("mehler.json")) == 0);
        const CoeffTensor t = coeff_tensor_from_json(load_json(path("mehler.json")));
        CHECK(t.size() == 65);
        CHECK(std::abs(t.at(MultiIndex{3}, MultiIndex{3}) -
                       Complex(std::exp(-3.5), 0.0)) <= 1e-15);
    }

    SECTION("rank-one (0,0): a single unit entry") {
        REQUIRE(run("generate --kind rank-one --alpha 0 --beta 0 --output " +
                    path("rank1.json")) == 0);
        const CoeffTensor t = coeff_tensor_from_json(load_json(path("rank1.json")));
        REQUIRE(t.size() == 1);
        CHECK(t.at(MultiIndex{0}, MultiIndex{0}) == Complex(1.0, 0.0));
    }

    SECTION("random-gs is byte-identical for identical seeds") {
        REQUIRE(run("generate --kind random-gs --N 16 --s 0.5 --r 0.5 --seed 7 "
                    "--output " + path("r1.json")) == 0);
        REQUIRE(run("generate --kind random-gs --N 16 --s 0.5 --r 0.5 --seed 7 "
                    "--output " + path("r2.json")) == 0);
        CHECK(slurp(path("r1.json")) == slurp(path("r2.json")));

        REQUIRE(run("generate --kind random-gs --N 16 --s 0.5 --r 0.5 --seed 8 "
                    "--output " + path("r3.json")) == 0);
        CHECK(slurp(path("r1.json")) != slurp(path("r3.json")));
    }

    SECTION("random-gs without a seed is a validation error") {
        CHECK(run("generate --kind random-gs --N 8 --output " + path("r4.json")) == 1);
    }

    SECTION("projector symbol honors --grid") {
        REQUIRE(run("generate --kind projector-symbol --grid -8,8,32 --output " +
                    path("proj.json")) == 0);
        const GridSymbol a = grid_symbol_from_json(load_json(path("proj.json")));
        CHECK(a.grid.axis1.n == 32);
        CHECK(std::abs(a.at(16, 16) - Complex(2.0, 0.0)) <= 1e-12); // a(0,0) = 2
    }

    SECTION("unknown kind / unknown flag / missing subcommand fail with 1") {
        CHECK(run("generate --kind nonsense") == 1);
        CHECK(run("generate --kind mehler --bogus-flag 3") == 1);
        CHECK(run("") == 1);
        CHECK(run("--help") == 0);
    }
}

TEST_CASE("factorize command") {
    REQUIRE(run("generate --kind mehler --tau 0.5 --N 32 --output " +
                path("m32.json")) == 0);

    SECTION("Roumieu run emits the verification block") {
        REQUIRE(run("factorize " + path("m32.json") + " --space Ss --s 0.5 --output " +
                    path("fact.json")) == 0);
        const Json j = load_json(path("fact.json"));
        CHECK(j.at("branch") == "roumieu");
        CHECK(j.at("verification").at("reconstruction_error").get<double>() <= 1e-12);
        CHECK(j.at("verification").at("positive_diagonal").get<bool>());
    }

    SECTION("--d0 2 extends the inner dimension with tensor order 0") {
        REQUIRE(run("factorize " + path("m32.json") +
                    " --space Ss --s 0.5 --d0 2 --output " + path("ext.json")) == 0);
        const Json j = load_json(path("ext.json"));
        CHECK(j.at("d0") == 2);
        CHECK(j.at("params").at("tensor_order") == Json::array({0}));
        CHECK(coeff_tensor_from_json(j.at("C")).d_left() == 2);
        CHECK(j.at("verification").at("positive_diagonal").get<bool>());
    }

    SECTION("--chain writes the factor list") {
        REQUIRE(run("factorize " + path("m32.json") +
                    " --space Ss --s 0.5 --chain 4 --output " + path("chain.json")) == 0);
        const Json j = load_json(path("chain.json"));
        CHECK(j.at("factors").size() == 4);
        CHECK(j.at("verification").at("reconstruction_error").get<double>() <= 1e-10);
        CHECK(j.at("verification").at("positive_diagonal").get<bool>());
    }

    SECTION("zero tensor and flag misuse exit 1") {
        save_json(to_json(CoeffTensor::square1d(8)), path("zero.json"));
        CHECK(run("factorize " + path("zero.json") + " --space Sigmas --s 1.0") == 1);
        CHECK(run("factorize " + path("m32.json") + " --space Sigmas --s 1.0 --r 0.5") == 1);
        CHECK(run("factorize " + path("m32.json") + " --space Ss --r 0.5 --chain 3") == 1);
        CHECK(run("factorize " + path("m32.json") + " --space bogus") == 1);
        CHECK(run("factorize " + path("missing.json") + " --space Ss") == 1);
    }
}

TEST_CASE("classify and decay commands") {
    REQUIRE(run("generate --kind mehler --tau 0.5 --N 64 --output " +
                path("m64.json")) == 0);

    REQUIRE(run("classify " + path("m64.json") + " --s 0.5 --mode roumieu --output " +
                path("class.json")) == 0);
    const Json c = load_json(path("class.json"));
    CHECK(c.at("class") == "roumieu");
    CHECK(std::abs(c.at("t_or_r").get<double>() - 0.5) <= 1e-6);

    REQUIRE(run("decay " + path("m64.json") + " --s 0.5 --output " +
                path("decay.json")) == 0);
    CHECK(std::abs(load_json(path("decay.json")).at("r_hat").get<double>() - 0.5) <= 1e-6);

    SECTION("single-entry tensor reports the infinite rate") {
        REQUIRE(run("generate --kind rank-one --alpha 0 --beta 0 --output " +
                    path("r00.json")) == 0);
        REQUIRE(run("decay " + path("r00.json") + " --s 0.5 --output " +
                    path("dinf.json")) == 0);
        CHECK(load_json(path("dinf.json")).at("r_hat") == "inf");
    }

    SECTION("zero tensor is a validation error") {
        save_json(to_json(CoeffTensor::square1d(4)), path("z4.json"));
        CHECK(run("decay " + path("z4.json") + " --s 0.5") == 1);
    }
}

TEST_CASE("grid commands") {
    REQUIRE(run("generate --kind projector-symbol --grid -8,8,256 --output " +
                path("p.json")) == 0);

    SECTION("quantize with equal endpoints is byte-stable") {
        REQUIRE(run("quantize " + path("p.json") + " --from 0.5 --to 0.5 --output " +
                    path("q.json")) == 0);
        CHECK(load_json(path("q.json")).at("values") ==
              load_json(path("p.json")).at("values"));
    }

    SECTION("kernel round trip through files") {
        REQUIRE(run("kernel " + path("p.json") + " --t 0.5 --direction to-kernel "
                    "--output " + path("k.json")) == 0);
        REQUIRE(run("kernel " + path("k.json") + " --t 0.5 --direction to-symbol "
                    "--output " + path("p2.json")) == 0);
        const GridSymbol a = grid_symbol_from_json(load_json(path("p.json")));
        const GridSymbol b = grid_symbol_from_json(load_json(path("p2.json")));
        double err = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i)
            err = std::max(err, std::abs(a.values[i] - b.values[i]));
        CHECK(err <= 1e-8);
    }

    SECTION("sharp of the projector with itself is itself") {
        REQUIRE(run("sharp " + path("p.json") + " " + path("p.json") + " --t 0.5 "
                    "--output " + path("pp.json")) == 0);
        const GridSymbol a = grid_symbol_from_json(load_json(path("p.json")));
        const GridSymbol b = grid_symbol_from_json(load_json(path("pp.json")));
        double err = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i)
            err = std::max(err, std::abs(a.values[i] - b.values[i]));
        CHECK(err <= 1e-6);
    }

    SECTION("zero symbol sharp is zero") {
        GridSymbol zero;
        zero.grid = square_grid(-8.0, 8.0, 64);
        zero.values.assign(64 * 64, Complex(0.0, 0.0));
        save_json(to_json(zero), path("z.json"));
        REQUIRE(run("sharp " + path("z.json") + " " + path("z.json") + " --t 0.5 "
                    "--output " + path("zz.json")) == 0);
        for (const Json& v : load_json(path("zz.json")).at("values")) {
            CHECK(v[0].get<double>() == 0.0);
            CHECK(v[1].get<double>() == 0.0);
        }
    }

    SECTION("window inadequacy exits 2") {
        const GridSymbol wide = gaussian_symbol(square_grid(-8.0, 8.0, 64), 1.0, 0.05,
                                                0.05, 0.0, 0.0);
        save_json(to_json(wide), path("wide.json"));
        CHECK(run("kernel " + path("wide.json") + " --t 0.5 --direction to-kernel") == 2);
        CHECK(run("quantize " + path("wide.json") + " --from 0.5 --to 0") == 2);
    }

    SECTION("factorize-symbol reports the sharp reconstruction error") {
        REQUIRE(run("factorize-symbol " + path("p.json") + " --t 0.5 --s 0.5 "
                    "--space Ss --output " + path("fs.json")) == 0);
        const Json j = load_json(path("fs.json"));
        CHECK(j.at("verification").at("sharp_error").get<double>() <= 1e-6);
        CHECK(j.at("verification").at("positive_diagonal").get<bool>());
    }
}

TEST_CASE("schatten and verify commands") {
    REQUIRE(run("generate --kind mehler --tau 0.5 --N 64 --output " +
                path("ms.json")) == 0);

    SECTION("norms for several orders") {
        REQUIRE(run("schatten " + path("ms.json") + " --p 2 --p inf --output " +
                    path("norms.json")) == 0);
        const Json j = load_json(path("norms.json"));
        const double expect = std::exp(-0.5) / std::sqrt(1.0 - std::exp(-2.0));
        CHECK(std::abs(j.at("norms").at("2").get<double>() - expect) <= 1e-10);
        CHECK(std::abs(j.at("norms").at("inf").get<double>() - std::exp(-0.5)) <= 1e-12);
        CHECK(j.at("sigma").size() == 65);
    }

    SECTION("deterministic output bytes") {
        REQUIRE(run("schatten " + path("ms.json") + " --p 2 --output " +
                    path("n1.json")) == 0);
        REQUIRE(run("schatten " + path("ms.json") + " --p 2 --output " +
                    path("n2.json")) == 0);
        CHECK(slurp(path("n1.json")) == slurp(path("n2.json")));
    }

    SECTION("verify checks pass and carry the digest") {
        REQUIRE(run("verify " + path("ms.json") + " --check hs --output " +
                    path("hs.json")) == 0);
        const Json hs = load_json(path("hs.json"));
        CHECK(hs.at("pass").get<bool>());
        CHECK(!hs.at("inputs_digest").get<std::string>().empty());

        REQUIRE(run("generate --kind random-gs --N 64 --s 0.5 --r 0.5 --seed 3 "
                    "--output " + path("a2.json")) == 0);
        REQUIRE(run("verify " + path("ms.json") + " --check hoelder --input2 " +
                    path("a2.json") + " --p1 2 --p2 2 --output " + path("hoe.json")) == 0);
        CHECK(load_json(path("hoe.json")).at("pass").get<bool>());

        REQUIRE(run("verify " + path("ms.json") + " --check embed --output " +
                    path("emb.json")) == 0);
        CHECK(load_json(path("emb.json")).at("pass").get<bool>());

        REQUIRE(run("verify " + path("ms.json") + " --check decay --s 0.5 --output " +
                    path("dec.json")) == 0);
        const Json dec = load_json(path("dec.json"));
        CHECK(dec.at("pass").get<bool>());
        CHECK(std::abs(dec.at("lhs").get<double>() - 1.0) <= 1e-6); // rho = 2 tau

        CHECK(run("verify " + path("ms.json") + " --check bogus") == 1);
        CHECK(run("verify " + path("ms.json") + " --check hoelder") == 1);
    }
}
