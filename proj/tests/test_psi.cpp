#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "copra/arithmetic.hpp"
#include "copra/errors.hpp"
#include "copra/io.hpp"
#include "copra/psi.hpp"
#include "copra/rng.hpp"

using namespace copra;

TEST_CASE("eval_psi catalog examples") {
    CHECK(eval_psi(make_psi_constant(0.25), 17) == 0.25);
    CHECK(eval_psi(make_psi_eps_over_q(0.1), 5) == 0.1 / 5.0);
    PsiSpec restricted = make_psi_restricted(predicate_primes(), make_psi_constant(0.25));
    CHECK(eval_psi(restricted, 6) == 0.0);
    CHECK(eval_psi(restricted, 7) == 0.25);
    CHECK_THROWS_AS(eval_psi(make_psi_constant(0.25), 0), std::invalid_argument);
}

TEST_CASE("power-log values and small-q conventions") {
    PsiSpec p2 = make_psi_power_log(2.0);
    CHECK(eval_psi(p2, 1) == 0.0);  // formula undefined at q=1
    CHECK(eval_psi(p2, 2) == 0.0);  // value would exceed 1/2
    CHECK(eval_psi(p2, 8) ==
          doctest::Approx(1.0 / (8.0 * std::log(8.0) * std::log(8.0))).epsilon(1e-15));
    // t=0 degenerates to 1/q: q=2 hits exactly 1/2 and stays admissible
    PsiSpec p0 = make_psi_power_log(0.0);
    CHECK(eval_psi(p0, 1) == 0.0);
    CHECK(eval_psi(p0, 2) == 0.5);
    CHECK(eval_psi(p0, 10) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("power-law values zero out above one half") {
    PsiSpec inv = make_psi_power_law(1.0, 1.0);
    CHECK(eval_psi(inv, 1) == 0.0);  // 1/1 exceeds the admissible range
    CHECK(eval_psi(inv, 2) == 0.5);
    CHECK(eval_psi(inv, 4) == 0.25);
    PsiSpec cubed = make_psi_power_law(1.0, 3.0);
    CHECK(eval_psi(cubed, 3) == doctest::Approx(1.0 / 27.0).epsilon(1e-15));
}

TEST_CASE("psi construction validation") {
    CHECK_THROWS_AS(make_psi_constant(0.75), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_constant(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_eps_over_q(0.6), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_power_law(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_power_law(1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_power_log(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_table({{4, 0.9}}), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_table({{4, 0.1}, {4, 0.2}}), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_table({{0, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(make_psi_custom(nullptr), std::invalid_argument);
}

TEST_CASE("table psi lookup and file loading") {
    PsiSpec mem = make_psi_table({{10, 0.25}, {2, 0.5}});
    CHECK(eval_psi(mem, 2) == 0.5);
    CHECK(eval_psi(mem, 10) == 0.25);
    CHECK(eval_psi(mem, 3) == 0.0);
    CHECK(eval_psi(mem, 11) == 0.0);

    const char* path = "psi_table_test.csv";
    write_file(path, "q,value\n3,0.125\n7,0.25\n");
    PsiSpec loaded = load_psi_table(path);
    CHECK(eval_psi(loaded, 3) == 0.125);
    CHECK(eval_psi(loaded, 7) == 0.25);
    CHECK(eval_psi(loaded, 5) == 0.0);
    CHECK(psi_to_text(loaded) == std::string("table:") + path);

    write_file(path, "3,0.125\n");
    CHECK_THROWS_AS(load_psi_table(path), UsageError);  // missing header
    write_file(path, "q,value\n3,0.9\n");
    CHECK_THROWS_AS(load_psi_table(path), UsageError);  // out of range
    write_file(path, "q,value\n3\n");
    CHECK_THROWS_AS(load_psi_table(path), UsageError);  // malformed row
    std::remove(path);
    CHECK_THROWS(load_psi_table("no_such_psi_table.csv"));
}

TEST_CASE("custom psi rules are range-checked per call") {
    PsiSpec bad = make_psi_custom([](std::uint64_t q) { return q == 7 ? 0.8 : 0.1; });
    CHECK(eval_psi(bad, 3) == 0.1);
    try {
        eval_psi(bad, 7);
        FAIL("expected PsiRangeError");
    } catch (const PsiRangeError& e) {
        CHECK(e.q == 7);
    }
}

TEST_CASE("psi text forms round-trip") {
    for (const char* text : {"const:0.25", "pow:c=1,s=3", "powlog:t=2", "eps_over_q:0.1",
                             "restrict:primes;const:0.25",
                             "restrict:ap:a=1,m=4;eps_over_q:0.2",
                             "restrict:powers:2;restrict:list:2,4,16;const:0.5",
                             "restrict:sampled:profile=upper,seed=7;const:0.125"}) {
        CAPTURE(text);
        PsiSpec spec = parse_psi(text);
        std::string printed = psi_to_text(spec);
        PsiSpec reparsed = parse_psi(printed);
        CHECK(psi_to_text(reparsed) == printed);
        for (std::uint64_t q = 1; q <= 200; ++q) CHECK(eval_psi(spec, q) == eval_psi(reparsed, q));
    }
}

TEST_CASE("psi and predicate parse errors") {
    CHECK_THROWS_AS(parse_psi("const:0.75"), UsageError);
    CHECK_THROWS_AS(parse_psi("const"), UsageError);
    CHECK_THROWS_AS(parse_psi("pow:c=1"), UsageError);
    CHECK_THROWS_AS(parse_psi("powlog:2"), UsageError);
    CHECK_THROWS_AS(parse_psi("nope:1"), UsageError);
    CHECK_THROWS_AS(parse_psi("restrict:primes"), UsageError);
    CHECK_THROWS_AS(parse_psi("const:abc"), UsageError);
    CHECK_THROWS_AS(parse_predicate("powers:1"), UsageError);
    CHECK_THROWS_AS(parse_predicate("ap:a=3,m=2"), UsageError);
    CHECK_THROWS_AS(parse_predicate("ap:a=1"), UsageError);
    CHECK_THROWS_AS(parse_predicate("bogus"), UsageError);
    CHECK_THROWS_AS(parse_predicate("sampled:profile=mid"), UsageError);
    CHECK_THROWS_AS(parse_predicate("list:"), UsageError);
    CHECK_THROWS_AS(predicate_to_text(predicate_custom([](std::uint64_t) { return true; })),
                    UsageError);
}

TEST_CASE("catalog specs stay in range over a large q sweep") {
    std::vector<PsiSpec> catalog;
    catalog.push_back(make_psi_constant(0.5));
    catalog.push_back(make_psi_power_law(1.0, 1.0));
    catalog.push_back(make_psi_power_law(0.5, 0.25));
    catalog.push_back(make_psi_power_log(0.0));
    catalog.push_back(make_psi_power_log(1.0));
    catalog.push_back(make_psi_power_log(3.0));
    catalog.push_back(make_psi_eps_over_q(0.5));
    catalog.push_back(make_psi_restricted(predicate_primes(), make_psi_power_log(2.0)));
    catalog.push_back(
        make_psi_restricted(predicate_sampled(SupportPredicate::Profile::OneOverLogSq, 3),
                            make_psi_constant(0.5)));
    SplitMix64 rng(555);
    for (const PsiSpec& spec : catalog) {
        for (std::uint64_t q = 1; q <= 2000; ++q) {
            double v = eval_psi(spec, q);
            CHECK(v >= 0.0);
            CHECK(v <= 0.5);
        }
        for (int i = 0; i < 300; ++i) {
            std::uint64_t q = 1 + rng.below(100000);
            double v = eval_psi(spec, q);
            CHECK(v >= 0.0);
            CHECK(v <= 0.5);
        }
    }
}

TEST_CASE("support predicate membership") {
    SupportPredicate all = predicate_all();
    SupportPredicate primes = predicate_primes();
    SupportPredicate pow2 = predicate_powers(2);
    SupportPredicate ap = predicate_progression(1, 4);
    SupportPredicate list = predicate_list({7, 3, 3, 11});

    CHECK(predicate_contains(all, 1));
    CHECK(predicate_contains(primes, 2));
    CHECK(!predicate_contains(primes, 6));
    CHECK(predicate_contains(pow2, 2));
    CHECK(predicate_contains(pow2, 64));
    CHECK(!predicate_contains(pow2, 1));  // powers start at base^1
    CHECK(!predicate_contains(pow2, 6));
    CHECK(predicate_contains(ap, 5));
    CHECK(!predicate_contains(ap, 4));
    CHECK(predicate_contains(list, 3));
    CHECK(predicate_contains(list, 11));
    CHECK(!predicate_contains(list, 5));
    CHECK(list.list == std::vector<std::uint64_t>{3, 7, 11});  // sorted, deduplicated
    CHECK_THROWS_AS(predicate_contains(all, 0), std::invalid_argument);
    CHECK_THROWS_AS(predicate_powers(1), std::invalid_argument);
    CHECK_THROWS_AS(predicate_progression(4, 4), std::invalid_argument);
    CHECK_THROWS_AS(predicate_list({0}), std::invalid_argument);
}

TEST_CASE("sampled predicates are deterministic in the seed") {
    SupportPredicate a = predicate_sampled(SupportPredicate::Profile::OneOverLogSq, 42);
    SupportPredicate b = predicate_sampled(SupportPredicate::Profile::OneOverLogSq, 42);
    SupportPredicate c = predicate_sampled(SupportPredicate::Profile::OneOverLogSq, 43);
    int members_a = 0, diff_ac = 0;
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        bool in_a = predicate_contains(a, n);
        CHECK(in_a == predicate_contains(b, n));
        if (in_a) ++members_a;
        if (in_a != predicate_contains(c, n)) ++diff_ac;
    }
    CHECK(members_a > 0);
    CHECK(diff_ac > 0);
    CHECK(!predicate_contains(a, 1));
}

TEST_CASE("density_profile counts and thresholds") {
    auto all = density_profile(predicate_all(), {100});
    CHECK(all[0].density == 1.0);
    CHECK(all[0].count == 100);

    auto primes = density_profile(predicate_primes(), {100});
    CHECK(primes[0].count == 25);
    CHECK(primes[0].density == 0.25);

    auto pow2 = density_profile(predicate_powers(2), {64});
    CHECK(pow2[0].count == 6);  // 2, 4, 8, 16, 32, 64
    CHECK(pow2[0].density == 6.0 / 64.0);

    // ratio columns: density divided by loglogN/log^2 N resp. 1/log^2 N
    double logn = std::log(100.0);
    CHECK(primes[0].ratio_upper ==
          doctest::Approx(0.25 / (std::log(logn) / (logn * logn))).epsilon(1e-12));
    CHECK(primes[0].ratio_lower == doctest::Approx(0.25 * logn * logn).epsilon(1e-12));
    auto tiny = density_profile(predicate_all(), {1, 2, 3});
    CHECK(std::isnan(tiny[0].ratio_upper));
    CHECK(std::isnan(tiny[0].ratio_lower));
    CHECK(std::isnan(tiny[1].ratio_upper));
    CHECK(!std::isnan(tiny[1].ratio_lower));
    CHECK(!std::isnan(tiny[2].ratio_upper));

    // the sieve fast path agrees with direct membership counting
    auto sieved = density_profile(predicate_primes(), {10000, 20000});
    CHECK(sieved[0].count == 1229);
    CHECK(sieved[1].count == 2262);

    CHECK_THROWS_AS(density_profile(predicate_all(), {}), std::invalid_argument);
    CHECK_THROWS_AS(density_profile(predicate_all(), {10, 10}), std::invalid_argument);
    CHECK_THROWS_AS(density_profile(predicate_all(), {0, 5}), std::invalid_argument);
}

TEST_CASE("density of a subset never exceeds its superset") {
    std::vector<std::uint64_t> grid = {16, 64, 256, 1024};
    auto evens = density_profile(predicate_progression(0, 2), grid);
    auto pow2 = density_profile(predicate_powers(2), grid);  // powers of 2 are even
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(pow2[i].density <= evens[i].density);
}

TEST_CASE("d_exponent_estimate harmonic benchmark") {
    // psi(q) = 1/q zeroed at q=1: at s=1 the terms are exactly 1/q for q >= 2
    PsiSpec inv = make_psi_power_law(1.0, 1.0);
    std::uint64_t Q = 65536;
    ExponentReport report = d_exponent_estimate(inv, {1.0}, Q);
    double harmonic = 0.0;
    for (std::uint64_t q = Q; q >= 2; --q) harmonic += 1.0 / static_cast<double>(q);
    CHECK(report.entries[0].partial_sum == doctest::Approx(harmonic).epsilon(1e-12));
    CHECK(report.entries[0].growing);  // dyadic increments stay near log 2
    CHECK(report.entries[0].octave_ratio == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("d_exponent_estimate brackets the cubic power law") {
    // psi(q) = q^{-3}: the series sum q^(1-4s) diverges iff s <= 1/2
    PsiSpec cubed = make_psi_power_law(1.0, 3.0);
    ExponentReport report = d_exponent_estimate(cubed, {0.5, 1.0}, 1 << 16);
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].growing);
    CHECK(!report.entries[1].growing);
    CHECK(report.s_low == 0.5);
    CHECK(report.s_high == 1.0);
    CHECK(report.s_low <= 2.0 / 3.0);
    CHECK(2.0 / 3.0 <= report.s_high);
}

TEST_CASE("d_exponent_estimate zero function and validation") {
    ExponentReport zero = d_exponent_estimate(make_psi_constant(0.0), {0.0, 0.5, 1.0}, 4096);
    for (const ExponentEntry& e : zero.entries) {
        CHECK(e.partial_sum == 0.0);
        CHECK(!e.growing);
    }
    CHECK(zero.s_low == 0.0);
    CHECK(zero.s_high == 0.0);

    CHECK_THROWS_AS(d_exponent_estimate(make_psi_constant(0.1), {}, 100), std::invalid_argument);
    CHECK_THROWS_AS(d_exponent_estimate(make_psi_constant(0.1), {1.5}, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(d_exponent_estimate(make_psi_constant(0.1), {0.5}, 0), std::invalid_argument);
}

TEST_CASE("d_exponent_estimate partial sums are monotone in Q and s") {
    PsiSpec spec = make_psi_eps_over_q(0.1);
    ExponentReport report = d_exponent_estimate(spec, {0.0, 0.25, 0.5, 0.75, 1.0}, 4096);
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const ExponentEntry& e = report.entries[i];
        // non-decreasing in Q along the dyadic checkpoints
        for (std::size_t j = 1; j < e.checkpoints.size(); ++j)
            CHECK(e.checkpoints[j].partial_sum >= e.checkpoints[j - 1].partial_sum);
        // non-increasing in s
        if (i) CHECK(e.partial_sum <= report.entries[i - 1].partial_sum);
    }
}
