#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pcnull/io.hpp"
#include "pcnull/matrix.hpp"

using namespace pcnull;

namespace {
ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected pcnull::Error");
    return ErrorCode::malformed;
}
}  // namespace

TEST_CASE("new_matrix builds an all-null matrix with unit diagonal") {
    const PCMatrix m = new_matrix(3, 5);
    CHECK(m.size() == 3);
    CHECK(m.null_pair_count() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j)
                CHECK(*m.at(i, j) == 1.0);
            else
                CHECK_FALSE(m.at(i, j).has_value());
        }

    const PCMatrix two = new_matrix(2, 5);
    CHECK(two.null_slots() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});

    CHECK(code_of([] { new_matrix(1, 5); }) == ErrorCode::size);
    CHECK(code_of([] { new_matrix(3, 1.0); }) == ErrorCode::scale);
    CHECK(code_of([] { new_matrix(3, 0.5); }) == ErrorCode::scale);
}

TEST_CASE("set_entry writes the reciprocal partner") {
    const PCMatrix m = set_entry(new_matrix(5), 0, 2, 2.0);
    CHECK(*m.at(0, 2) == 2.0);
    CHECK(*m.at(2, 0) == 0.5);

    // writing through the lower cell stores the reciprocal upstairs
    const PCMatrix lower = set_entry(new_matrix(3), 2, 1, 4.0);
    CHECK(*lower.at(1, 2) == 0.25);
    CHECK(*lower.at(2, 1) == 4.0);

    CHECK(code_of([] { set_entry(new_matrix(5), 0, 0, 1.0); }) == ErrorCode::diagonal_write);
    CHECK(code_of([] { set_entry(new_matrix(5), 0, 1, -1.0); }) == ErrorCode::domain);
    CHECK(code_of([] { set_entry(new_matrix(5), 0, 1, 0.0); }) == ErrorCode::domain);
    CHECK(code_of([] { set_entry(new_matrix(5), 0, 7, 2.0); }) == ErrorCode::index);
}

TEST_CASE("strict scale mode rejects out-of-scale writes, lenient accepts") {
    PCMatrix strict(3, 5, ScaleMode::strict);
    CHECK(code_of([&] { strict.set(0, 1, 7.0); }) == ErrorCode::scale);
    CHECK(code_of([&] { strict.set(0, 1, 0.1); }) == ErrorCode::scale);
    strict.set(0, 1, 5.0);
    strict.set(0, 2, 0.2);
    CHECK(strict.known(0, 1));

    PCMatrix lenient(3, 5);
    lenient.set(0, 1, 7.0);
    const Diagnostics d = validate(lenient);
    REQUIRE(d.size() == 2);  // 7 and 1/7
    CHECK(d[0].kind == Violation::out_of_scale);
    CHECK(d[0].severity == Severity::warning);
    CHECK_FALSE(has_errors(d));
}

TEST_CASE("clear_entry nulls both cells and is idempotent") {
    const PCMatrix set = set_entry(new_matrix(3), 0, 1, 3.0);
    const PCMatrix cleared = clear_entry(set, 0, 1);
    CHECK_FALSE(cleared.at(0, 1));
    CHECK_FALSE(cleared.at(1, 0));
    CHECK(clear_entry(cleared, 1, 0) == cleared);
    CHECK(code_of([&] { clear_entry(set, 1, 1); }) == ErrorCode::diagonal_write);
}

TEST_CASE("known_triads enumerates complete triples lexicographically") {
    const PCMatrix example = fixtures::worked_example();
    const auto triads = known_triads(example);

    // Oracle: every C(5,3) triple, keep the ones with all three entries known.
    std::size_t expected = 0;
    const auto d = fixtures::dense(example);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j)
            for (std::size_t k = j + 1; k < 5; ++k)
                if (d[i][j] && d[i][k] && d[j][k]) ++expected;
    CHECK(expected == 7);
    CHECK(triads.size() == expected);
    for (std::size_t t = 1; t < triads.size(); ++t)
        CHECK(std::tuple(triads[t - 1].i, triads[t - 1].j, triads[t - 1].k) <
              std::tuple(triads[t].i, triads[t].j, triads[t].k));
    for (const auto& t : triads) CHECK(t.ix == doctest::Approx(fixtures::oracle_ix(t.x, t.y, t.z)).epsilon(1e-15));

    CHECK(known_triads(new_matrix(4)).empty());
    CHECK(known_triads(fixtures::quotient_matrix({1, 2, 3})).size() == 1);
}

TEST_CASE("triads_through lists companions with the slot in the right position") {
    const PCMatrix example = fixtures::worked_example();
    const auto t = triads_through(example, 0, 1);
    REQUIRE(t.size() == 3);
    const double expected[3][2] = {{2, 2.5}, {3, 2.5}, {4, 3}};
    for (int k = 0; k < 3; ++k) {
        CHECK(t[k].variable == TriadSlot::x);
        CHECK(t[k].first == expected[k][0]);
        CHECK(t[k].second == expected[k][1]);
    }

    PCMatrix only13(3);
    only13.set(0, 2, 4.0);
    CHECK(triads_through(only13, 0, 1).empty());

    const PCMatrix full = fixtures::quotient_matrix({1, 2, 3, 4, 5});
    const auto through24 = triads_through(full, 1, 3);
    REQUIRE(through24.size() == 3);
    // k=0 -> (0,1,3) slot z; k=2 -> (1,2,3) slot y; k=4 -> (1,3,4) slot x
    CHECK(through24[0].variable == TriadSlot::z);
    CHECK(through24[1].variable == TriadSlot::y);
    CHECK(through24[2].variable == TriadSlot::x);
    for (const auto& c : through24) CHECK(c.with(full.value(1, 3)).ix == doctest::Approx(0.0));
}

TEST_CASE("validate reports raw-grid defects") {
    DenseGrid g = parse_csv_grid("1,2\n0.6,1\n");
    Diagnostics d = validate(g);
    REQUIRE(d.size() == 1);
    CHECK(d[0].kind == Violation::reciprocity);
    CHECK(d[0].i == 0);
    CHECK(d[0].j == 1);

    CHECK(validate(fixtures::worked_example()).empty());
    CHECK(validate(parse_csv("1,?,2,3,4\n?,1,2.5,2.5,3\n1/2,1/2.5,1,1.3,1.8\n1/3,1/2.5,1/1.3,1,1.5\n"
                             "1/4,1/3,1/1.8,1/1.5,1\n"))
              .empty());

    g = parse_csv_grid("2,1\n1,1\n");
    d = validate(g);
    REQUIRE(d.size() == 1);
    CHECK(d[0].kind == Violation::diagonal);

    g = parse_csv_grid("1,?\n2,1\n");
    d = validate(g);
    REQUIRE(d.size() == 1);
    CHECK(d[0].kind == Violation::unpaired_null);

    g = parse_csv_grid("1,-2\n-0.5,1\n");
    d = validate(g);
    CHECK(d.size() == 2);
    CHECK(d[0].kind == Violation::non_positive);
}

TEST_CASE("property: set/clear sequences keep reciprocity and the diagonal") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logv(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 8;
        PCMatrix m(n);
        std::uniform_int_distribution<std::size_t> idx(0, n - 1);
        for (int op = 0; op < 40; ++op) {
            std::size_t i = idx(rng), j = idx(rng);
            if (i == j) continue;
            const PCMatrix before = m;
            if (rng() % 3) {
                m = set_entry(m, i, j, std::exp(logv(rng)));
                // set then clear restores the prior pair state exactly when it was null
                if (!before.known(i, j)) CHECK(clear_entry(m, i, j) == before);
            } else {
                m = clear_entry(m, i, j);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(*m.at(i, i) == 1.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                CHECK(m.known(i, j) == m.known(j, i));
                if (m.known(i, j)) CHECK(std::abs(m.value(i, j) * m.value(j, i) - 1.0) <= 1e-9);
            }
        }
        CHECK_FALSE(has_errors(validate(m)));
    }
}

TEST_CASE("property: complete matrices have C(n,3) triads and n-2 per slot") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 3; n <= 9; ++n) {
        const PCMatrix m = fixtures::random_matrix(rng, n, 0.0);
        CHECK(known_triads(m).size() == n * (n - 1) * (n - 2) / 6);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) CHECK(triads_through(m, i, j).size() == n - 2);
    }
}
