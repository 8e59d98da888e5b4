#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hermop/factorize.hpp"
#include "hermop/generators.hpp"

using namespace hermop;

namespace {

CoeffTensor origin_only() {
    CoeffTensor a = CoeffTensor::square1d(0);
    a.set(MultiIndex{0}, MultiIndex{0}, Complex(1.0, 0.0));
    return a;
}

CoeffTensor squared_decay(int n_trunc) {
    CoeffTensor out = CoeffTensor::square1d(n_trunc);
    for (int n = 0; n <= n_trunc; ++n)
        out.set(MultiIndex{n}, MultiIndex{n},
                Complex(std::exp(-static_cast<double>(n) * n), 0.0));
    return out;
}

CoeffTensor sparse_random(int n_trunc, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };
    CoeffTensor out = CoeffTensor::square1d(n_trunc);
    for (int k = 0; k < count; ++k) {
        const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n_trunc + 1));
        const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n_trunc + 1));
        out.set(MultiIndex{a}, MultiIndex{b}, Complex(u(), u()));
    }
    return out;
}

} // namespace

TEST_CASE("factorize_roumieu closed forms") {
    SECTION("origin-only tensor: B = A, C = identity") {
        const FactorPair pair = factorize_roumieu(origin_only(), 0.5, 3.7);
        CHECK(pair.B.at(MultiIndex{0}, MultiIndex{0}) == Complex(1.0, 0.0));
        CHECK(pair.C.at(MultiIndex{0}, MultiIndex{0}) == Complex(1.0, 0.0));
        CHECK(max_rel_diff(matmul(pair.B, pair.C), origin_only()) == 0.0);
    }

    SECTION("Mehler: b_nn = e^{-(2n+1)tau + tau n} and the two sup-estimates") {
        const double tau = 0.5;
        const CoeffTensor a = mehler_tensor(tau, 64);
        const FactorPair pair = factorize_roumieu(a, 0.5, tau);

        for (int n = 0; n <= 64; ++n) {
            const double expect = std::exp(-(2.0 * n + 1.0) * tau + tau * n);
            CHECK(std::abs(pair.B.at(MultiIndex{n}, MultiIndex{n}) - Complex(expect, 0.0)) <=
                  1e-15 * expect);
        }

        double recon = 0.0;
        const CoeffTensor prod = matmul(pair.B, pair.C);
        for (const auto& [key, v] : a.entries())
            recon = std::max(recon, std::abs(prod.at(key.first, key.second) - v));
        CHECK(recon <= 1e-14);

        CHECK(check_bound(pair.B, 0.5, tau / 2) <= std::exp(-tau) * (1.0 + 1e-12));
        CHECK(check_bound(pair.B, 0.5, tau / 2) <=
              check_bound(a, 0.5, tau) * (1.0 + 1e-12));
        CHECK(check_bound(pair.C, 0.5, tau / 2) <= 1.0 + 1e-12);
    }

    SECTION("random sparse input at the fitted rate") {
        const CoeffTensor a = sparse_random(32, 50, 1234);
        const FactorPair pair = factorize_roumieu(a, 0.5);
        CHECK(max_rel_diff(matmul(pair.B, pair.C), a) <= 1e-12);
        CHECK(is_positive_hermite_diagonal(pair.C).first);
    }

    SECTION("parameter validation") {
        CHECK_THROWS_AS(factorize_roumieu(origin_only(), 0.5, 0.0), ValidationError);
        CHECK_THROWS_AS(factorize_roumieu(origin_only(), 0.5, -1.0), ValidationError);
        CHECK_THROWS_AS(factorize_roumieu(origin_only(), 0.3, 1.0), ValidationError);
        CHECK_THROWS_AS(factorize_roumieu(CoeffTensor::square1d(4), 0.5), ValidationError);
    }
}

TEST_CASE("theta_partition") {
    SECTION("zero tensor: all thetas -1, one block") {
        const Partition part = theta_partition(CoeffTensor::square1d(5), 0.5, 4);
        for (long th : part.theta)
            CHECK(th == -1);
        for (const auto& [beta, j] : part.blocks)
            CHECK(j == 1);
        CHECK(part.blocks.size() == 6);
    }

    SECTION("single unit entry at |beta| = 3") {
        CoeffTensor a(1, 1, {0}, {5});
        a.set(MultiIndex{0}, MultiIndex{3}, Complex(1.0, 0.0));
        // |a| = 1 >= e^{-2(N+1)(...)} holds for every N, so Theta_N = 3
        const Partition part = theta_partition(a, 0.5, 3);
        for (long th : part.theta)
            CHECK(th == 3);
        // I_1 = {|beta| <= Theta_1 + 1 = 4} covers beta_0
        CHECK(part.block_of(MultiIndex{3}) == 1);
        CHECK(part.block_of(MultiIndex{4}) == 1);
        CHECK(part.block_of(MultiIndex{5}) == 2);
    }

    SECTION("brute-force scan oracle for e^{-n^2}, s = 1") {
        const int n_trunc = 32, jmax = 8;
        const double s = 1.0;
        const CoeffTensor a = squared_decay(n_trunc);

        std::vector<long> theta_ref(jmax, -1);
        for (int n = 1; n <= jmax; ++n)
            for (int k = 0; k <= n_trunc; ++k) {
                const double w = 2.0 * std::pow(static_cast<double>(k), 1.0 / (2.0 * s));
                if (std::exp(-static_cast<double>(k) * k) >=
                    std::exp(-2.0 * (n + 1) * w))
                    theta_ref[static_cast<std::size_t>(n - 1)] =
                        std::max(theta_ref[static_cast<std::size_t>(n - 1)],
                                 static_cast<long>(k));
            }

        const Partition part = theta_partition(a, s, jmax);
        CHECK(part.theta == theta_ref);

        // block induction replayed independently
        for (const auto& [beta, j] : part.blocks) {
            int j_ref = jmax + 1;
            for (int jj = 1; jj <= jmax; ++jj) {
                const long cap = theta_ref[static_cast<std::size_t>(jj - 1)] +
                                 (jj == 1 ? 1 : jj);
                if (beta.order() <= cap) {
                    j_ref = jj;
                    break;
                }
            }
            CHECK(j == j_ref);
        }
    }

    SECTION("partition laws: disjoint cover with the block inequality") {
        const CoeffTensor a = random_gs_tensor(16, 1, 1.0, 0.6, 77);
        const Partition part = theta_partition(a, 1.0, 6);
        CHECK(part.blocks.size() == 17); // every beta in the box, exactly once
        for (const auto& [beta, j] : part.blocks) {
            REQUIRE(j >= 1);
            if (j <= part.jmax) {
                const long cap =
                    part.theta[static_cast<std::size_t>(j - 1)] + (j == 1 ? 1 : j);
                CHECK(beta.order() <= cap);
            }
        }
    }
}

TEST_CASE("factorize_beurling") {
    SECTION("origin-only: B = A, C = identity") {
        const FactorPair pair = factorize_beurling(origin_only(), 1.0);
        CHECK(pair.B.at(MultiIndex{0}, MultiIndex{0}) == Complex(1.0, 0.0));
        CHECK(pair.C.at(MultiIndex{0}, MultiIndex{0}) == Complex(1.0, 0.0));
    }

    SECTION("e^{-n^2} at s = 1: reconstruction and bound stability") {
        const FactorPair p32 = factorize_beurling(squared_decay(32), 1.0);
        CHECK(max_rel_diff(matmul(p32.B, p32.C), squared_decay(32)) <= 1e-12);
        CHECK(is_positive_hermite_diagonal(p32.C).first);

        const FactorPair p16 = factorize_beurling(squared_decay(16), 1.0);
        for (double r : {1.0, 2.0, 4.0}) {
            const double b16 = check_bound(p16.B, 1.0, r);
            const double b32 = check_bound(p32.B, 1.0, r);
            CHECK(std::abs(b32 - b16) <= 0.05 * b16);
        }
    }

    SECTION("gaussian-tail random tensor reconstructs") {
        const CoeffTensor a = random_gs_tensor(24, 1, 1.0, 0.8, 2024);
        const FactorPair pair = factorize_beurling(a, 1.0);
        CHECK(max_rel_diff(matmul(pair.B, pair.C), a) <= 1e-12);
        for (const auto& [beta, j] : pair.partition->blocks)
            CHECK(j <= pair.partition->jmax); // auto jmax covers the box
    }

    SECTION("validation") {
        CHECK_THROWS_AS(factorize_beurling(origin_only(), 0.5), ValidationError);
        CHECK_THROWS_AS(factorize_beurling(CoeffTensor::square1d(3), 1.0),
                        ValidationError);
    }
}

TEST_CASE("factorize_schwartz") {
    SECTION("origin-only: B = A, C = identity") {
        const FactorPair pair = factorize_schwartz(origin_only());
        CHECK(pair.B.at(MultiIndex{0}, MultiIndex{0}) == Complex(1.0, 0.0));
        CHECK(pair.C.at(MultiIndex{0}, MultiIndex{0}) == Complex(1.0, 0.0));
    }

    SECTION("(1+n+m)^{-20}: reconstruction and weighted-sup stability") {
        auto poly = [](int n_trunc) {
            CoeffTensor out = CoeffTensor::square1d(n_trunc);
            for (int n = 0; n <= n_trunc; ++n)
                for (int m = 0; m <= n_trunc; ++m)
                    out.set(MultiIndex{n}, MultiIndex{m},
                            Complex(std::pow(1.0 + n + m, -20.0), 0.0));
            return out;
        };

        const FactorPair p32 = factorize_schwartz(poly(32));
        CHECK(max_rel_diff(matmul(p32.B, p32.C), poly(32)) <= 1e-12);
        CHECK(is_positive_hermite_diagonal(p32.C).first);

        auto weighted_sup = [](const CoeffTensor& b, double t) {
            double sup = 0.0;
            for (const auto& [key, v] : b.entries()) {
                const double nb = key.second.order();
                sup = std::max(sup, std::abs(v) * std::pow(1.0 + nb * nb, t / 2.0));
            }
            return sup;
        };
        const FactorPair p16 = factorize_schwartz(poly(16));
        const double s16 = weighted_sup(p16.B, 4.0);
        const double s32 = weighted_sup(p32.B, 4.0);
        CHECK(std::isfinite(s32));
        CHECK(std::abs(s32 - s16) <= 0.05 * s16);
    }

    SECTION("random tensor reconstructs") {
        const CoeffTensor a = sparse_random(20, 60, 555);
        const FactorPair pair = factorize_schwartz(a);
        CHECK(max_rel_diff(matmul(pair.B, pair.C), a) <= 1e-12);
    }

    CHECK_THROWS_AS(factorize_schwartz(CoeffTensor::square1d(3)), ValidationError);
}

TEST_CASE("extend_inner_dim") {
    const CoeffTensor a = mehler_tensor(0.5, 10);
    const FactorPair base = factorize_roumieu(a, 0.5, 0.5);
    const FactorPair ext = extend_inner_dim(base, 2);

    SECTION("composition over the extended index reproduces A") {
        // explicit contraction including the new inner variable
        double worst = 0.0;
        for (int al = 0; al <= 10; ++al)
            for (int be = 0; be <= 10; ++be) {
                Complex acc(0.0, 0.0);
                for (int g1 = 0; g1 <= 10; ++g1)
                    acc += ext.B.at(MultiIndex{al}, MultiIndex{g1, 0}) *
                           ext.C.at(MultiIndex{g1, 0}, MultiIndex{be});
                worst = std::max(worst,
                                 std::abs(acc - a.at(MultiIndex{al}, MultiIndex{be})));
            }
        CHECK(worst <= 1e-14);
        CHECK(max_rel_diff(matmul(ext.B, ext.C), a) <= 1e-14);
    }

    SECTION("extension is a positive Hermite diagonal with tensor order 0") {
        auto [ok, diag] = is_positive_hermite_diagonal(ext.C);
        CHECK(ok);
        REQUIRE(diag.tensor_order.has_value());
        CHECK(*diag.tensor_order == MultiIndex{0});
        CHECK(ext.tensor_order.has_value());
    }

    SECTION("projecting the extra index back recovers the factors") {
        for (const auto& [key, v] : ext.C.entries()) {
            CHECK(key.first.tail_from(1) == MultiIndex{0});
            CHECK(base.C.at(key.first.head(1), key.second) == v);
        }
        for (const auto& [key, v] : ext.B.entries()) {
            CHECK(key.second.tail_from(1) == MultiIndex{0});
            CHECK(base.B.at(key.first, key.second.head(1)) == v);
        }
    }

    SECTION("extend twice equals extend once to the final dimension") {
        const FactorPair two_step = extend_inner_dim(ext, 3);
        const FactorPair one_step = extend_inner_dim(base, 3);
        CHECK(two_step.B.entries() == one_step.B.entries());
        CHECK(two_step.C.entries() == one_step.C.entries());
    }

    CHECK_THROWS_AS(extend_inner_dim(base, 1), ValidationError);
}

TEST_CASE("is_positive_hermite_diagonal") {
    SECTION("the Roumieu C factor, with its eigenvalues") {
        const double r = 0.8, s = 0.5;
        const FactorPair pair = factorize_roumieu(mehler_tensor(0.5, 12), s, r);
        auto [ok, diag] = is_positive_hermite_diagonal(pair.C);
        REQUIRE(ok);
        for (const auto& [alpha, lambda] : diag.eigenvalues)
            CHECK(lambda ==
                  Catch::Approx(std::exp(-r * index_weight(alpha, s))).epsilon(1e-14));
    }

    SECTION("rejections") {
        CoeffTensor off = CoeffTensor::square1d(1);
        off.set(MultiIndex{0}, MultiIndex{1}, Complex(1.0, 0.0));
        CHECK_FALSE(is_positive_hermite_diagonal(off).first);

        CoeffTensor neg = CoeffTensor::square1d(0);
        neg.set(MultiIndex{0}, MultiIndex{0}, Complex(-1.0, 0.0));
        CHECK_FALSE(is_positive_hermite_diagonal(neg).first);

        CoeffTensor cplx = CoeffTensor::square1d(0);
        cplx.set(MultiIndex{0}, MultiIndex{0}, Complex(1.0, 0.5));
        CHECK_FALSE(is_positive_hermite_diagonal(cplx).first);
    }
}

TEST_CASE("adjoint route puts the diagonal factor on the left") {
    // The d0 >= d2 case of the decomposition: factorize the adjoint, then
    // take adjoints again. The roles of the factors swap, so the positive
    // Hermite diagonal lands on the left.
    const CoeffTensor a = sparse_random(16, 40, 909);
    const FactorPair pair = factorize_roumieu(adjoint(a), 0.5);
    const CoeffTensor left = adjoint(pair.C);
    const CoeffTensor right = adjoint(pair.B);
    CHECK(max_rel_diff(matmul(left, right), a) <= 1e-12);
    CHECK(is_positive_hermite_diagonal(left).first);
}

TEST_CASE("factorization in two variables") {
    const CoeffTensor a = random_gs_tensor(6, 2, 0.5, 0.6, 808);

    SECTION("Roumieu branch") {
        const FactorPair pair = factorize_roumieu(a, 0.5, 0.4);
        CHECK(max_rel_diff(matmul(pair.B, pair.C), a) <= 1e-12);
        CHECK(is_positive_hermite_diagonal(pair.C).first);
        CHECK(pair.C.d_left() == 2);
    }

    SECTION("Beurling branch with the multi-index partition") {
        const FactorPair pair = factorize_beurling(a, 1.0);
        CHECK(max_rel_diff(matmul(pair.B, pair.C), a) <= 1e-12);
        CHECK(pair.partition->blocks.size() == 49);
    }

    SECTION("inner extension from d0 = 2 to d0 = 3") {
        const FactorPair ext = extend_inner_dim(factorize_roumieu(a, 0.5, 0.4), 3);
        CHECK(max_rel_diff(matmul(ext.B, ext.C), a) <= 1e-12);
        auto [ok, diag] = is_positive_hermite_diagonal(ext.C);
        CHECK(ok);
        CHECK(*diag.tensor_order == MultiIndex{0});
    }
}

TEST_CASE("factor_chain") {
    const CoeffTensor a = mehler_tensor(0.5, 32);

    SECTION("two factors reproduce the single factorization") {
        const auto chain = factor_chain(a, 0.5, 2, Branch::Roumieu);
        const FactorPair single = factorize_roumieu(a, 0.5);
        REQUIRE(chain.size() == 2);
        CHECK(chain[0].entries() == single.B.entries());
        CHECK(chain[1].entries() == single.C.entries());
    }

    SECTION("five factors: product error and positive diagonals") {
        const auto chain = factor_chain(a, 0.5, 5, Branch::Roumieu);
        REQUIRE(chain.size() == 5);
        CHECK(max_rel_diff(chain_product(chain), a) <= 1e-10);
        for (std::size_t i = 1; i < chain.size(); ++i)
            CHECK(is_positive_hermite_diagonal(chain[i]).first);
    }

    CHECK_THROWS_AS(factor_chain(a, 0.5, 1, Branch::Roumieu), ValidationError);
}
