#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latmove/error.hpp"
#include "latmove/lattice.hpp"

#include "test_util.hpp"

#include <cmath>
#include <set>

using namespace latmove;

TEST_CASE("published neighbor vector sets") {
    const auto fcc = lattice_from_name("FCC");
    CHECK(fcc.neighbor_vectors.size() == 12);
    const std::set<Coord> fset(fcc.neighbor_vectors.begin(), fcc.neighbor_vectors.end());
    for (Coord v : {Coord{1, 1, 0}, Coord{1, 0, 1}, Coord{0, 1, 1}, Coord{1, -1, 0}, Coord{1, 0, -1},
                    Coord{0, 1, -1}}) {
        CHECK(fset.count(v) == 1);
        CHECK(fset.count(Coord{} - v) == 1);
    }

    const auto cub = lattice_from_name("CUB");
    CHECK(cub.neighbor_vectors.size() == 6);
    CHECK(cub.unit_length == doctest::Approx(1.0));

    const auto sq = lattice_from_name("SQ");
    CHECK(sq.neighbor_vectors.size() == 4);
    for (Coord v : sq.neighbor_vectors) CHECK(v.z == 0);
}

TEST_CASE("lattice names are case-insensitive, unknown names rejected") {
    CHECK(lattice_from_name("fcc").name == "FCC");
    CHECK(lattice_from_name("Cub").name == "CUB");
    CHECK_THROWS_AS(lattice_from_name("BCC"), Error);
    try {
        lattice_from_name("BCC");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("SQ") != std::string::npos);
        CHECK(msg.find("FCC") != std::string::npos);
    }
}

TEST_CASE("are_neighbors") {
    const auto fcc = lattice_from_name("FCC");
    CHECK(fcc.are_neighbors({0, 0, 0}, {1, 1, 0}));
    CHECK_FALSE(fcc.are_neighbors({0, 0, 0}, {1, 0, 0}));
    CHECK_FALSE(fcc.are_neighbors({2, 3, 4}, {2, 3, 4})); // zero vector excluded

    // symmetry over the whole vector set
    for (const auto& name : {"SQ", "CUB", "FCC"}) {
        const auto L = lattice_from_name(name);
        for (Coord v : L.neighbor_vectors) {
            CHECK(L.are_neighbors({0, 0, 0}, v));
            CHECK(L.are_neighbors(v, {0, 0, 0}));
        }
    }
}

TEST_CASE("neighbors_of is ordered and translation invariant") {
    const auto sq = lattice_from_name("SQ");
    const std::vector<Coord> expect{{1, 3, 0}, {2, 2, 0}, {2, 4, 0}, {3, 3, 0}};
    CHECK(sq.neighbors_of({2, 3, 0}) == expect);

    const auto fcc = lattice_from_name("FCC");
    CHECK(fcc.neighbors_of({0, 0, 0}).size() == 12);
    const auto cub = lattice_from_name("CUB");
    const auto at_origin = cub.neighbors_of({0, 0, 0});
    CHECK(at_origin.size() == 6);
    for (Coord c : at_origin) {
        CHECK(std::abs(c.x) + std::abs(c.y) + std::abs(c.z) == 1);
    }

    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        const Coord p{int(rng.below(21)) - 10, int(rng.below(21)) - 10, int(rng.below(21)) - 10};
        CHECK(fcc.neighbors_of(p).size() == 12);
    }
}

TEST_CASE("angstrom scaling puts every neighbor pair at 3.8 A") {
    const auto cub = lattice_from_name("CUB");
    const Vec3 v = to_angstrom(cub, {1, 0, 0});
    CHECK(v[0] == doctest::Approx(3.8).epsilon(1e-12));
    CHECK(v[1] == 0.0);
    CHECK(v[2] == 0.0);

    const Vec3 zero = to_angstrom(cub, {0, 0, 0});
    CHECK((zero[0] == 0.0 && zero[1] == 0.0 && zero[2] == 0.0));

    for (const auto& name : {"SQ", "CUB", "FCC"}) {
        const auto L = lattice_from_name(name);
        for (Coord nb : L.neighbors_of({0, 0, 0})) {
            const Vec3 a = to_angstrom(L, {0, 0, 0});
            const Vec3 b = to_angstrom(L, nb);
            const double d = std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                                       (a[2] - b[2]) * (a[2] - b[2]));
            CHECK(std::abs(d - 3.8) < 1e-9);
        }
    }
}

TEST_CASE("all 48 signed axis permutations preserve the FCC vector set") {
    const auto fcc = lattice_from_name("FCC");
    int preserving = 0;
    for (const auto& ap : testutil::all_signed_perms()) {
        if (testutil::preserves_vector_set(ap, fcc)) ++preserving;
    }
    CHECK(preserving == 48);

    // and they preserve the neighbor relation itself
    for (const auto& ap : testutil::all_signed_perms()) {
        for (Coord v : fcc.neighbor_vectors) {
            CHECK(fcc.are_neighbors(ap.apply({3, -2, 5}), ap.apply(Coord{3, -2, 5} + v)));
        }
    }
}
