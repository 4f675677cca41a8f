#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latmove/error.hpp"
#include "latmove/io.hpp"
#include "latmove/search.hpp"

#include "test_util.hpp"

#include <cmath>
#include <sstream>

using namespace latmove;

TEST_CASE("structure files round trip") {
    const BackboneStructure c{make_lattice("SQ"), {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}};
    std::ostringstream os;
    write_structure(os, "HPH", AnyStructure{c});

    std::istringstream in(os.str());
    const auto loaded = read_structure(in);
    CHECK(loaded.sequence == "HPH");
    CHECK(kind_of(loaded.structure) == ModelKind::backbone);
    CHECK(same_coords(std::get<BackboneStructure>(loaded.structure), c));
}

TEST_CASE("structure file round trip over randomized structures") {
    Rng rng(301);
    for (const char* lattice : {"SQ", "CUB", "FCC"}) {
        const auto lat = make_lattice(lattice);
        for (int t = 0; t < 200; ++t) {
            const int n = 1 + static_cast<int>(rng.below(12));
            const auto c = random_valid_backbone(n, lat, rng.next());
            const auto seq = testutil::random_sequence(rng, n, "HP");
            std::ostringstream os;
            write_structure(os, seq, AnyStructure{c});
            std::istringstream in(os.str());
            const auto back = read_structure(in);
            CHECK(back.sequence == seq);
            CHECK(same_coords(std::get<BackboneStructure>(back.structure), c));
        }
        if (lattice == std::string("SQ")) continue; // side chains need 3D room at these sizes
        for (int t = 0; t < 200; ++t) {
            const int n = 1 + static_cast<int>(rng.below(8));
            const auto c = random_valid_sidechain(n, lat, rng.next());
            const auto seq = testutil::random_sequence(rng, n, "HP");
            std::ostringstream os;
            write_structure(os, seq, AnyStructure{c});
            std::istringstream in(os.str());
            const auto back = read_structure(in);
            CHECK(back.sequence == seq);
            CHECK(same_coords(std::get<SideChainStructure>(back.structure), c));
        }
    }
}

TEST_CASE("structure file rejects broken input") {
    // connectivity violation
    std::istringstream broken("lattice SQ\nmodel backbone\nsequence HH\n1 0 0 0\n2 2 0 0\n");
    CHECK_THROWS_WITH_AS(read_structure(broken), doctest::Contains("broken chain"), Error);

    // missing side-chain columns
    std::istringstream missing("lattice CUB\nmodel sidechain\nsequence H\n1 0 0 0\n");
    CHECK_THROWS_WITH_AS(read_structure(missing), doctest::Contains("side-chain"), Error);

    // bad index
    std::istringstream idx("lattice SQ\nmodel backbone\nsequence HH\n1 0 0 0\n3 1 0 0\n");
    CHECK_THROWS_WITH_AS(read_structure(idx), doctest::Contains("row index"), Error);

    // truncated
    std::istringstream eof("lattice SQ\nmodel backbone\nsequence HHH\n1 0 0 0\n2 1 0 0\n");
    CHECK_THROWS_AS(read_structure(eof), Error);

    // unknown lattice
    std::istringstream lat("lattice HEX\nmodel backbone\nsequence H\n1 0 0 0\n");
    CHECK_THROWS_AS(read_structure(lat), Error);

    // comments and blank lines are fine anywhere
    std::istringstream ok("# header\nlattice SQ\n\nmodel backbone\n# mid\nsequence HH\n1 0 0 0\n2 1 0 0 # tail\n");
    CHECK(read_structure(ok).sequence == "HH");
}

TEST_CASE("hp mapping file overlays the default table") {
    std::istringstream in("# identity for H/P letters\nH = H\nP = P\n");
    const auto m = load_hp_mapping(in);
    CHECK(m.at('H') == 'H');
    CHECK(m.at('P') == 'P');
    CHECK(m.at('A') == 'H'); // untouched default

    std::istringstream bad("H == H\n");
    CHECK_THROWS_AS(load_hp_mapping(bad), Error);
    std::istringstream bad2("H = X\n");
    CHECK_THROWS_AS(load_hp_mapping(bad2), Error);
}

namespace {

std::string atom_line(int serial, const char* name, const char* res, char chain, int seq, double x, double y,
                      double z, const char* element, char alt = ' ', char icode = ' ') {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ATOM  %5d %-4s%c%3s %c%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f          %2s\n",
                  serial, name, alt, res, chain, seq, icode, x, y, z, 1.0, 20.0, element);
    return buf;
}

} // namespace

TEST_CASE("pdb reader extracts CA and side-chain centroids") {
    std::string pdb;
    // ALA with a single CB: centroid equals CB
    pdb += atom_line(1, " N", "ALA", 'A', 1, 0.0, 0.0, 0.0, "N");
    pdb += atom_line(2, " CA", "ALA", 'A', 1, 1.0, 0.0, 0.0, "C");
    pdb += atom_line(3, " C", "ALA", 'A', 1, 2.0, 0.0, 0.0, "C");
    pdb += atom_line(4, " O", "ALA", 'A', 1, 3.0, 0.0, 0.0, "O");
    pdb += atom_line(5, " CB", "ALA", 'A', 1, 1.0, 1.5, 0.0, "C");
    // GLY: centroid = CA
    pdb += atom_line(6, " N", "GLY", 'A', 2, 4.0, 0.0, 0.0, "N");
    pdb += atom_line(7, " CA", "GLY", 'A', 2, 5.0, 0.0, 0.0, "C");
    pdb += atom_line(8, " C", "GLY", 'A', 2, 6.0, 0.0, 0.0, "C");
    // SER with two side atoms: centroid is their mean; hydrogens ignored
    pdb += atom_line(9, " CA", "SER", 'A', 3, 8.0, 0.0, 0.0, "C");
    pdb += atom_line(10, " CB", "SER", 'A', 3, 8.0, 2.0, 0.0, "C");
    pdb += atom_line(11, " OG", "SER", 'A', 3, 8.0, 4.0, 0.0, "O");
    pdb += atom_line(12, " HB1", "SER", 'A', 3, 50.0, 50.0, 50.0, "H");
    // alternate conformer B is skipped
    pdb += atom_line(13, " CB", "SER", 'A', 3, 99.0, 99.0, 99.0, "C", 'B');
    // another chain
    pdb += atom_line(14, " CA", "ALA", 'B', 1, 0.0, 7.0, 0.0, "C");

    std::istringstream in(pdb);
    const auto chain = read_pdb_points(in, 'A');
    REQUIRE(chain.residues.size() == 3);

    CHECK(chain.residues[0].code == 'A');
    CHECK(chain.residues[0].ca == Vec3{1.0, 0.0, 0.0});
    CHECK(chain.residues[0].centroid == Vec3{1.0, 1.5, 0.0});

    CHECK(chain.residues[1].code == 'G');
    CHECK(chain.residues[1].centroid == chain.residues[1].ca);

    CHECK(chain.residues[2].code == 'S');
    CHECK(chain.residues[2].centroid == Vec3{8.0, 3.0, 0.0});

    std::istringstream in2(pdb);
    const auto other = read_pdb_points(in2, 'B');
    CHECK(other.residues.size() == 1);

    std::istringstream in3(pdb);
    CHECK_THROWS_WITH_AS(read_pdb_points(in3, 'Z'), doctest::Contains("not found"), Error);

    std::istringstream empty("HEADER    NOTHING\nEND\n");
    CHECK_THROWS_WITH_AS(read_pdb_points(empty, 'A'), doctest::Contains("no ATOM"), Error);
}

TEST_CASE("pdb reader keeps MODEL 1 only and counts missing CA") {
    std::string pdb;
    pdb += "MODEL        1\n";
    pdb += atom_line(1, " CA", "ALA", 'A', 1, 1.0, 0.0, 0.0, "C");
    pdb += atom_line(2, " CB", "ALA", 'A', 1, 1.0, 1.0, 0.0, "C");
    pdb += "ENDMDL\n";
    pdb += "MODEL        2\n";
    pdb += atom_line(3, " CA", "ALA", 'A', 1, 9.0, 9.0, 9.0, "C");
    pdb += "ENDMDL\n";
    std::istringstream in(pdb);
    const auto chain = read_pdb_points(in, 'A');
    REQUIRE(chain.residues.size() == 1);
    CHECK(chain.residues[0].ca == Vec3{1.0, 0.0, 0.0});

    // residue without CA is skipped and counted
    std::string nocap;
    nocap += atom_line(1, " CB", "ALA", 'A', 1, 1.0, 1.0, 0.0, "C");
    nocap += atom_line(2, " CA", "ALA", 'A', 2, 2.0, 0.0, 0.0, "C");
    nocap += atom_line(3, " CB", "ALA", 'A', 2, 2.0, 1.0, 0.0, "C");
    std::istringstream in2(nocap);
    const auto c2 = read_pdb_points(in2, 'A');
    CHECK(c2.residues.size() == 1);
    CHECK(c2.skipped_missing_ca == 1);
}

TEST_CASE("pdb points convert to comparable point sets") {
    std::string pdb;
    pdb += atom_line(1, " CA", "ALA", 'A', 1, 0.0, 0.0, 0.0, "C");
    pdb += atom_line(2, " CB", "ALA", 'A', 1, 0.0, 1.0, 0.0, "C");
    pdb += atom_line(3, " CA", "ALA", 'A', 2, 3.8, 0.0, 0.0, "C");
    pdb += atom_line(4, " CB", "ALA", 'A', 2, 3.8, 1.0, 0.0, "C");
    std::istringstream in(pdb);
    const auto pts = to_points(read_pdb_points(in, 'A'));
    CHECK(pts.size() == 2);
    CHECK(pts.has_side());
    CHECK(std::abs(crmsd(pts, pts)) < 1e-12);
}
