#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latmove/error.hpp"
#include "latmove/model.hpp"
#include "latmove/search.hpp"

#include "test_util.hpp"

#include <sstream>

using namespace latmove;

namespace {

BackboneStructure bb(const char* lattice, std::vector<Coord> coords) {
    return BackboneStructure{make_lattice(lattice), std::move(coords)};
}

SideChainStructure sc(const char* lattice, std::vector<Coord> b, std::vector<Coord> s) {
    return SideChainStructure{make_lattice(lattice), std::move(b), std::move(s)};
}

} // namespace

TEST_CASE("backbone validation") {
    CHECK_FALSE(validate_backbone(bb("SQ", {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}})));

    const auto revisit = validate_backbone(bb("SQ", {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}}));
    REQUIRE(revisit.has_value());
    CHECK(revisit->kind == ValidationIssue::Kind::clash);
    CHECK(revisit->i == 1);
    CHECK(revisit->j == 3);

    const auto broken = validate_backbone(bb("FCC", {{0, 0, 0}, {1, 0, 0}}));
    REQUIRE(broken.has_value());
    CHECK(broken->kind == ValidationIssue::Kind::broken_chain);
    CHECK(broken->i == 1);
}

TEST_CASE("side-chain validation") {
    CHECK_FALSE(validate_sidechain(sc("CUB", {{0, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {1, 1, 0}})));

    const auto clash = validate_sidechain(sc("CUB", {{0, 0, 0}, {1, 0, 0}}, {{1, 0, 0}, {2, 0, 0}}));
    REQUIRE(clash.has_value());
    CHECK(clash->kind == ValidationIssue::Kind::clash);

    const auto detached = validate_sidechain(sc("CUB", {{0, 0, 0}, {1, 0, 0}}, {{0, 2, 0}, {1, 1, 0}}));
    REQUIRE(detached.has_value());
    CHECK(detached->kind == ValidationIssue::Kind::detached_sidechain);
    CHECK(detached->i == 1);

    const auto mismatch = validate_sidechain(sc("CUB", {{0, 0, 0}, {1, 0, 0}}, {{0, 1, 0}}));
    REQUIRE(mismatch.has_value());
    CHECK(mismatch->kind == ValidationIssue::Kind::length_mismatch);
}

TEST_CASE("hp potential") {
    const auto hp = hp_potential();
    CHECK(hp.at('H', 'H') == -1.0);
    CHECK(hp.at('H', 'P') == 0.0);
    CHECK(hp.at('P', 'H') == 0.0);
    CHECK(hp.at('P', 'P') == 0.0);
    CHECK_THROWS_AS(hp.at('A', 'H'), Error);
}

TEST_CASE("backbone energy on the U-shaped HPPH chain") {
    const auto hp = hp_potential();
    const auto c = bb("SQ", {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
    CHECK(energy_backbone("HPPH", c, hp, true) == -1.0);
    CHECK(energy_backbone("HPPH", c, hp, false) == -1.0);

    const auto two = bb("SQ", {{0, 0, 0}, {1, 0, 0}});
    CHECK(energy_backbone("PP", two, hp, true) == 0.0);
    CHECK(energy_backbone("PP", two, hp, false) == 0.0);

    CHECK_THROWS_AS(energy_backbone("HP", c, hp, false), Error);  // length mismatch
    CHECK_THROWS_AS(energy_backbone("HXPH", c, hp, false), Error); // unknown symbol
}

TEST_CASE("side-chain energy sees side contacts only") {
    const auto hp = hp_potential();
    CHECK(energy_sidechain("HH", sc("CUB", {{0, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {1, 1, 0}}), hp) == -1.0);
    CHECK(energy_sidechain("HH", sc("CUB", {{0, 0, 0}, {1, 0, 0}}, {{0, -1, 0}, {1, 1, 0}}), hp) == 0.0);

    const ContactPotential zero("HP", {0, 0, 0, 0});
    CHECK(energy_sidechain("HH", sc("CUB", {{0, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {1, 1, 0}}), zero) == 0.0);
}

TEST_CASE("side-chain energy is independent of backbone placement") {
    // two backbones carrying the identical side-chain point set
    const auto a = sc("FCC", {{0, 0, 0}, {1, 0, 1}, {2, 0, 0}}, {{-1, -1, 0}, {1, 1, 0}, {3, 1, 0}});
    const auto b = sc("FCC", {{0, 0, 0}, {1, 0, -1}, {2, 0, 0}}, {{-1, -1, 0}, {1, 1, 0}, {3, 1, 0}});
    REQUIRE_FALSE(validate_sidechain(a));
    REQUIRE_FALSE(validate_sidechain(b));
    const auto hp = hp_potential();
    CHECK(energy_sidechain("HHH", a, hp) == energy_sidechain("HHH", b, hp));
}

TEST_CASE("energy difference of the chain-adjacency flag is the chain term") {
    Rng rng(11);
    const auto lat = make_lattice("FCC");
    const auto hp = hp_potential();
    for (int t = 0; t < 30; ++t) {
        const auto c = random_valid_backbone(8, lat, rng.next());
        const auto s = testutil::random_sequence(rng, 8, "HP");
        double chain_term = 0.0;
        for (int i = 0; i + 1 < 8; ++i) chain_term += hp.at(s[i], s[i + 1]);
        CHECK(energy_backbone(s, c, hp, false) - energy_backbone(s, c, hp, true) == chain_term);
    }
}

TEST_CASE("energies and validity are invariant under lattice symmetries and translation") {
    Rng rng(23);
    for (const char* name : {"SQ", "CUB", "FCC"}) {
        const auto lat = make_lattice(name);
        const auto perms = testutil::all_signed_perms();
        const auto hp = hp_potential();
        for (int t = 0; t < 10; ++t) {
            const auto c = random_valid_backbone(7, lat, rng.next());
            const auto s = testutil::random_sequence(rng, 7, "HP");
            const double e0 = energy_backbone(s, c, hp, false);
            for (const auto& ap : perms) {
                if (!testutil::preserves_vector_set(ap, *lat)) continue;
                const Coord shift{int(rng.below(9)) - 4, int(rng.below(9)) - 4,
                                  name == std::string("SQ") ? 0 : int(rng.below(9)) - 4};
                const auto moved = testutil::transformed(c, ap, shift);
                CHECK_FALSE(validate_backbone(moved));
                CHECK(energy_backbone(s, moved, hp, false) == e0);
            }
        }
    }
}

TEST_CASE("potential file parsing") {
    std::istringstream ok("# comment\nH P\n-1 0\n0 0\n");
    const auto p = load_potential(ok);
    CHECK(p.at('H', 'H') == -1.0);
    CHECK(p.at('H', 'P') == 0.0);

    std::istringstream asym("A C\n0.5 0.25\n0.26 0\n");
    CHECK_THROWS_WITH_AS(load_potential(asym), doctest::Contains("asymmetric"), Error);

    std::istringstream dup("A A\n0 0\n0 0\n");
    CHECK_THROWS_WITH_AS(load_potential(dup), doctest::Contains("duplicate"), Error);

    std::istringstream short_row("A C\n0.5\n0.2 0\n");
    CHECK_THROWS_AS(load_potential(short_row), Error);

    // round-trip symmetry of a larger matrix
    std::ostringstream big;
    const std::string alpha = "ACDEFGHIKL";
    big << alpha[0];
    for (std::size_t i = 1; i < alpha.size(); ++i) big << " " << alpha[i];
    big << "\n";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            big << (j ? " " : "") << 0.01 * static_cast<double>((i + 1) * (j + 1) % 17);
        }
        big << "\n";
    }
    std::istringstream bigin(big.str());
    const auto p20 = load_potential(bigin);
    for (char a : alpha) {
        for (char b : alpha) CHECK(p20.at(a, b) == p20.at(b, a));
    }
}

TEST_CASE("hp translation") {
    const auto m = HPMapping::default_mapping();
    CHECK(translate_to_hp("AK", m) == "HP");
    CHECK_THROWS_AS(translate_to_hp("", m), Error);
    CHECK_THROWS_AS(translate_to_hp("AZ", m), Error); // Z is not an amino-acid code

    HPMapping all_h = m;
    for (char c : std::string("ARNDCQEGHILKMFPSTWYV")) all_h.set(c, 'H');
    CHECK(translate_to_hp("ARNDCQEGHILKMFPSTWYV", all_h) == "HHHHHHHHHHHHHHHHHHHH");

    // default split: 9 hydrophobic, 11 polar
    int h = 0;
    for (char c : std::string("ARNDCQEGHILKMFPSTWYV")) {
        if (m.at(c) == 'H') ++h;
    }
    CHECK(h == 9);
}
