#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "odecert/errors.hpp"
#include "odecert/matpoly.hpp"
#include "odecert/poly.hpp"
#include "odecert/roots.hpp"

#include <random>

using namespace odecert;

namespace {

std::mt19937_64 rng(987654);

GaussianRational small_rat(long span = 6) {
    std::uniform_int_distribution<long> num(-span, span);
    std::uniform_int_distribution<long> den(1, 4);
    return GaussianRational(num(rng), den(rng));
}

GaussianRational small_gauss(long span = 6) {
    std::uniform_int_distribution<long> num(-span, span);
    std::uniform_int_distribution<long> den(1, 3);
    return GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
}

Poly random_poly(int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    int d = deg(rng);
    std::vector<GaussianRational> c(static_cast<std::size_t>(d) + 1);
    for (auto& x : c) x = small_gauss();
    if (c.back().is_zero()) c.back() = GaussianRational(1);
    return Poly(c);
}

const Poly kQuadratic({GaussianRational(2), GaussianRational(3), GaussianRational(1)});

} // namespace

TEST_CASE("poly_divmod examples") {
    Poly xp1({GaussianRational(1), GaussianRational(1)});
    auto [q, r] = poly_divmod(kQuadratic, xp1);
    CHECK(q == Poly({GaussianRational(2), GaussianRational(1)}));
    CHECK(r.is_zero());
    CHECK(xp1 * q + r == kQuadratic);

    auto [q1, r1] = poly_divmod(kQuadratic, Poly::constant(GaussianRational(1)));
    CHECK(q1 == kQuadratic);
    CHECK(r1.is_zero());

    Poly xp2({GaussianRational(2), GaussianRational(1)});
    Poly x2p1({GaussianRational(1), GaussianRational(0), GaussianRational(1)});
    auto [q2, r2] = poly_divmod(xp2, x2p1);
    CHECK(q2.is_zero());
    CHECK(r2 == xp2);

    CHECK_THROWS_AS(poly_divmod(kQuadratic, Poly::zero()), division_by_zero_poly);
}

TEST_CASE("poly_divmod reconstruction on random pairs") {
    for (int i = 0; i < 400; ++i) {
        Poly p = random_poly(8);
        Poly d = random_poly(4);
        if (d.is_zero()) continue;
        auto [q, r] = poly_divmod(p, d);
        CHECK(d * q + r == p);
        CHECK(r.degree() < d.degree());
    }
}

TEST_CASE("divides examples") {
    Poly xp1({GaussianRational(1), GaussianRational(1)});
    CHECK(divides(xp1, kQuadratic));
    CHECK(!divides(Poly::X(), Poly::constant(GaussianRational(1))));
    CHECK(divides(kQuadratic, kQuadratic));
    CHECK_THROWS_AS(divides(Poly::zero(), kQuadratic), division_by_zero_poly);
}

TEST_CASE("reduce_at_root matches the reduction recurrence") {
    // X^2+3X+2 at z=-1: b1=1, b0=3+(-1)*1=2, rem=2+(-1)*2=0
    auto d = reduce_at_root(kQuadratic, GaussianRational(-1));
    CHECK(d.reduced == Poly({GaussianRational(2), GaussianRational(1)}));
    CHECK(d.remainder == GaussianRational(0));

    GaussianRational c(7, 3);
    auto lin = reduce_at_root(Poly({-c, GaussianRational(1)}), c);
    CHECK(lin.reduced == Poly::constant(GaussianRational(1)));
    CHECK(lin.remainder == GaussianRational(0));

    Poly p = random_poly(6);
    while (p.degree() < 1) p = random_poly(6);
    auto at0 = reduce_at_root(p, GaussianRational(0));
    CHECK(at0.remainder == p.coeff(0));
    for (int i = 0; i < at0.reduced.degree() + 1; ++i)
        CHECK(at0.reduced.coeff(static_cast<std::size_t>(i)) == p.coeff(static_cast<std::size_t>(i) + 1));

    CHECK_THROWS_AS(reduce_at_root(Poly::constant(GaussianRational(3)), GaussianRational(0)),
                    degree_zero_input);
}

TEST_CASE("reconstruction identity (X - z) R + rem = P on random pairs") {
    for (int i = 0; i < 400; ++i) {
        Poly p = random_poly(8);
        if (p.degree() < 1) continue;
        GaussianRational z = small_gauss();
        auto d = reduce_at_root(p, z);
        Poly back = Poly({-z, GaussianRational(1)}) * d.reduced + Poly::constant(d.remainder);
        CHECK(back == p);
    }
}

TEST_CASE("box-coefficient synthetic division encloses the exact one") {
    // divide X^2+3X+2 by (X - z) for a box z around -1
    ComplexBox z = ComplexBox::from_exact(GaussianRational(-1), 40).inflate(Dyadic::pow2(-38));
    auto d = reduce_at_root(kQuadratic, z, 48);
    REQUIRE(d.reduced.size() == 2);
    CHECK(d.reduced[0].contains(GaussianRational(2)));
    CHECK(d.reduced[1].contains(GaussianRational(1)));
    CHECK(d.remainder.contains(GaussianRational(0)));

    // enclosure identity: for any exact point in z, the exact reduction
    // coefficients lie inside the box ones
    GaussianRational z_exact(-1);
    auto exact = reduce_at_root(kQuadratic, z_exact);
    for (int i = 0; i <= exact.reduced.degree(); ++i)
        CHECK(d.reduced[static_cast<std::size_t>(i)].contains(
            exact.reduced.coeff(static_cast<std::size_t>(i))));
    CHECK(d.remainder.contains(exact.remainder));
}

TEST_CASE("root/remainder equivalences on constructed roots") {
    for (int i = 0; i < 200; ++i) {
        GaussianRational sigma = small_gauss();
        Poly p = Poly({-sigma, GaussianRational(1)}) * random_poly(4);
        if (p.degree() < 1) continue;
        auto d = reduce_at_root(p, sigma);
        CHECK(d.remainder.is_zero());        // sigma is a root <=> b_{-1} = 0
        CHECK(p.eval(sigma).is_zero());
        // sigma * b_0(sigma) = -a_0
        CHECK(sigma * d.reduced.coeff(0) == -p.coeff(0));

        GaussianRational z = small_gauss() + GaussianRational(17, 5); // very unlikely a root
        if (!p.eval(z).is_zero()) {
            auto dz = reduce_at_root(p, z);
            CHECK(dz.remainder == p.eval(z));
            CHECK(!dz.remainder.is_zero());
        }
    }
}

TEST_CASE("certified_roots on the worked examples") {
    auto r = certified_roots(kQuadratic, 30);
    REQUIRE(r.items().size() == 2);
    CHECK(r.items()[0].box.contains(GaussianRational(-2)));
    CHECK(r.items()[1].box.contains(GaussianRational(-1)));
    for (const auto& it : r.items()) {
        CHECK(it.multiplicity == 1);
        CHECK(it.box.width() <= Dyadic::pow2(-30));
    }

    Poly dbl({GaussianRational(1), GaussianRational(-2), GaussianRational(1)});
    auto r2 = certified_roots(dbl, 30);
    REQUIRE(r2.items().size() == 1);
    CHECK(r2.items()[0].multiplicity == 2);
    CHECK(r2.items()[0].box.contains(GaussianRational(1)));

    Poly x2p1({GaussianRational(1), GaussianRational(0), GaussianRational(1)});
    auto r3 = certified_roots(x2p1, 30);
    REQUIRE(r3.items().size() == 2);
    CHECK(r3.items()[0].box.contains(-GaussianRational::i()));
    CHECK(r3.items()[1].box.contains(GaussianRational::i()));
}

TEST_CASE("certified_roots separates clustered and high-degree root sets") {
    // eight equispaced roots k/8
    std::vector<GaussianRational> dense;
    for (long k = 1; k <= 8; ++k) dense.push_back(GaussianRational(k, 8));
    Poly p = Poly::from_roots(dense);
    auto enc = certified_roots(p, 30);
    REQUIRE(enc.items().size() == 8);
    for (long k = 1; k <= 8; ++k) {
        bool found = false;
        for (const auto& it : enc.items())
            if (it.box.contains(GaussianRational(k, 8))) found = true;
        CHECK(found);
    }

    // a tight cluster: 1, 1 + 1e-6, 1 + 2e-6 (plus a far root)
    mpq_class eps(1, 1000000);
    Poly q = Poly::from_roots({GaussianRational(1), GaussianRational(mpq_class(1) + eps),
                               GaussianRational(mpq_class(1) + 2 * eps), GaussianRational(-5)});
    auto enc2 = certified_roots(q, 40);
    REQUIRE(enc2.items().size() == 4);
    CHECK(enc2.total_multiplicity() == 4);
    for (std::size_t a = 0; a < enc2.items().size(); ++a)
        for (std::size_t b = a + 1; b < enc2.items().size(); ++b)
            CHECK(!enc2.items()[a].box.intersects(enc2.items()[b].box));
}

TEST_CASE("certified_roots multiplicities sum to the degree") {
    for (int i = 0; i < 40; ++i) {
        std::uniform_int_distribution<int> nroots(1, 4);
        std::uniform_int_distribution<int> rep(1, 2);
        std::vector<GaussianRational> roots;
        int n = nroots(rng);
        for (int k = 0; k < n; ++k) {
            GaussianRational r = small_rat();
            int m = rep(rng);
            for (int j = 0; j < m; ++j) roots.push_back(r);
        }
        Poly p = Poly::from_roots(roots);
        auto enc = certified_roots(p, 24);
        CHECK(enc.total_multiplicity() == p.degree());
        for (std::size_t a = 0; a < enc.items().size(); ++a)
            for (std::size_t b = a + 1; b < enc.items().size(); ++b)
                CHECK(!enc.items()[a].box.intersects(enc.items()[b].box));
    }
}

TEST_CASE("deflation removes exactly one copy of the root") {
    // Z(R_sigma[P]) = Z(P) minus one copy of sigma
    std::vector<GaussianRational> roots = {GaussianRational(1), GaussianRational(1),
                                           GaussianRational(-2), GaussianRational(1, 2)};
    Poly p = Poly::from_roots(roots);
    GaussianRational sigma(1);
    auto d = reduce_at_root(p, sigma);
    CHECK(d.remainder.is_zero());
    auto enc = certified_roots(d.reduced, 30);
    CHECK(enc.total_multiplicity() == 3);
    int found_one = 0, found_minus2 = 0, found_half = 0;
    for (const auto& it : enc.items()) {
        if (it.box.contains(GaussianRational(1))) {
            CHECK(it.multiplicity == 1); // was 2 in P
            ++found_one;
        }
        if (it.box.contains(GaussianRational(-2))) ++found_minus2;
        if (it.box.contains(GaussianRational(1, 2))) ++found_half;
    }
    CHECK(found_one == 1);
    CHECK(found_minus2 == 1);
    CHECK(found_half == 1);
}

TEST_CASE("multiset inclusion worked examples") {
    Poly xp1({GaussianRational(1), GaussianRational(1)});
    auto zy = certified_roots(xp1, 30);
    auto zu = certified_roots(kQuadratic, 30);
    CHECK(multiset_root_inclusion(zy, zu) == Inclusion::Included);

    auto zx = certified_roots(Poly::X(), 30);
    CHECK(multiset_root_inclusion(zx, zy) == Inclusion::NotIncluded);

    Poly dbl({GaussianRational(1), GaussianRational(-2), GaussianRational(1)});
    Poly single({GaussianRational(-1), GaussianRational(1)});
    CHECK(multiset_root_inclusion(certified_roots(dbl, 30), certified_roots(single, 30)) ==
          Inclusion::NotIncluded);
}

TEST_CASE("divides and root inclusion agree on random factored pairs") {
    int inconclusive = 0;
    const int trials = 60;
    for (int i = 0; i < trials; ++i) {
        std::uniform_int_distribution<int> deg(1, 3);
        std::vector<GaussianRational> ra, rb;
        for (int k = deg(rng); k > 0; --k) ra.push_back(small_rat(4));
        for (int k = deg(rng); k > 0; --k) rb.push_back(small_rat(4));
        std::uniform_int_distribution<int> coin(0, 1);
        if (coin(rng)) {
            // force divisibility: roots of A are a sub-multiset of B's
            rb = ra;
            for (int k = coin(rng) + 1; k > 0; --k) rb.push_back(small_rat(4));
        }
        Poly a = Poly::from_roots(ra);
        Poly b = Poly::from_roots(rb);
        bool div = divides(a, b);
        Inclusion inc = multiset_root_inclusion(certified_roots(a, 24), certified_roots(b, 24));
        if (inc == Inclusion::Inconclusive) {
            ++inconclusive;
            continue;
        }
        CHECK((inc == Inclusion::Included) == div);
    }
    CHECK(inconclusive * 20 < trials); // < 5%
}

TEST_CASE("find_excluded_root certifies blowup witnesses") {
    Poly py({GaussianRational(0), GaussianRational(1)}); // X
    Poly pu({GaussianRational(1), GaussianRational(1)}); // X + 1
    auto w = find_excluded_root(certified_roots(py, 24), certified_roots(pu, 24));
    REQUIRE(w.has_value());
    CHECK(!w->deficit);
    CHECK(w->box.contains(GaussianRational(0)));

    // multiplicity-deficit witness
    Poly dbl({GaussianRational(1), GaussianRational(-2), GaussianRational(1)});
    Poly single({GaussianRational(-1), GaussianRational(1)});
    auto w2 = find_excluded_root(certified_roots(dbl, 24), certified_roots(single, 24));
    REQUIRE(w2.has_value());
    CHECK(w2->deficit);
}

TEST_CASE("matpoly_eval worked examples") {
    QMatrix a0(2, 2);
    a0.at(0, 0) = GaussianRational(1);
    a0.at(0, 1) = GaussianRational(-1);
    a0.at(1, 1) = GaussianRational(2);

    // P = I X + A0 evaluated at -A0 vanishes identically
    MatPoly p(2, {a0, QMatrix::identity(2)});
    CHECK(matpoly_eval(p, -a0).is_zero());

    MatPoly constant(2, {a0});
    QMatrix any(2, 2);
    any.at(0, 0) = GaussianRational(5);
    CHECK(matpoly_eval(constant, any) == a0);

    MatPoly ix(2, {QMatrix(2, 2), QMatrix::identity(2)});
    CHECK(matpoly_eval(ix, a0) == a0);
}
