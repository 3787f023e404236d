import random

import pytest

from hermsig.algebras import AlgebraWithInvolution, is_invertible
from hermsig.cones import (
    PositiveCone,
    SquareCertificate,
    CertTerm,
    SymmetricSetCandidate,
    UnionCandidate,
    cone_membership,
    enumerate_positive_cones,
    eta_maximal,
    find_sos_certificate,
    formally_real,
    positivity_sets,
    prepositive_axiom_check,
    verify_certificate,
)
from hermsig.field import QQ, NumberField, sign_at
from hermsig.hermitian import reference_form

SQRT2 = NumberField([-2, 0, 1])
P0 = QQ.orderings[0]

HAMILTON1 = AlgebraWithInvolution(QQ, "quat_symp", 1, a=-1, b=-1)
HAMILTON2 = AlgebraWithInvolution(QQ, "quat_symp", 2, a=-1, b=-1)
SO2 = AlgebraWithInvolution(QQ, "split_orth", 2)
SO3 = AlgebraWithInvolution(QQ, "split_orth", 3)


def test_membership_schur_complement_example():
    m = HAMILTON2.element([[2, (0, 1, 0, 0)], [(0, -1, 0, 0), 1]])
    assert HAMILTON2.is_symmetric_element(m)
    plus = PositiveCone(HAMILTON2, P0, 1)
    minus = PositiveCone(HAMILTON2, P0, -1)
    assert cone_membership(m, plus)
    assert not cone_membership(m, minus)


def test_membership_basics():
    plus = PositiveCone(SO2, P0, 1)
    minus = PositiveCone(SO2, P0, -1)
    indef = SO2.element([[1, 0], [0, -1]])
    assert not plus.contains(indef)
    assert not minus.contains(indef)
    assert plus.contains(SO2.zero_element)
    assert minus.contains(SO2.zero_element)
    psd_singular = SO2.element([[1, 1], [1, 1]])
    assert plus.contains(psd_singular)
    assert not minus.contains(psd_singular)
    with pytest.raises(ValueError):
        plus.contains(SO2.element([[0, 1], [0, 0]]))


def test_membership_matches_quadratic_psd_for_split_orth():
    rng = random.Random(60)
    plus = PositiveCone(SO2, P0, 1)
    for _ in range(30):
        raw = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        sym = [[QQ.element(raw[r][c] + raw[c][r]) for c in range(2)] for r in range(2)]
        m = SO2.element(sym)
        a, b, c = sym[0][0], sym[1][1], sym[0][1]
        det = a * b - c * c
        trace_psd = (sign_at(a, P0) >= 0 and sign_at(b, P0) >= 0
                     and sign_at(det, P0) >= 0)
        assert plus.contains(m) == trace_psd


def test_cone_membership_skew_family_matches_split_oracle():
    alg = AlgebraWithInvolution(QQ, "quat_skew", 1, a=1, b=1)
    eta = reference_form(alg)
    q = alg.quat
    # N(q) = J phi(q); membership in an oriented cone must match the
    # definiteness of N at the ordering
    from hermsig.algebras import SplitIsomorphism

    phi = SplitIsomorphism(alg.quat)
    plus = PositiveCone(alg, P0, 1, eta)
    minus = PositiveCone(alg, P0, -1, eta)
    rng = random.Random(61)
    for _ in range(40):
        coords = [rng.randint(-2, 2) for _ in range(3)]
        if all(c == 0 for c in coords):
            continue
        pure = q.element(0, *coords)
        m = alg.scalar_element(pure)
        img = phi.apply(pure)
        n_mat = [img[1], [-v for v in img[0]]]  # J * phi
        a, b, c = n_mat[0][0], n_mat[1][1], n_mat[0][1]
        det = a * b - c * c
        psd = sign_at(a, P0) >= 0 and sign_at(b, P0) >= 0 and sign_at(det, P0) >= 0
        nsd = sign_at(a, P0) <= 0 and sign_at(b, P0) <= 0 and sign_at(det, P0) >= 0
        # membership orientation depends on the reference sign, so compare
        # the unordered pair of verdicts
        assert {plus.contains(m), minus.contains(m)} == {psd, nsd}


def test_eta_maximal():
    eta = reference_form(HAMILTON1)
    assert eta_maximal(HAMILTON1.one_element, P0, eta)
    assert not eta_maximal(-HAMILTON1.one_element, P0, eta)
    with pytest.raises(ValueError):
        eta_maximal(HAMILTON1.zero_element, P0, eta)
    # vacuous maximality at a nil ordering
    allnil = AlgebraWithInvolution(QQ, "quat_symp", 1, a=1, b=1)
    assert eta_maximal(allnil.one_element, P0, reference_form(allnil))


def test_enumerate_cones_counts():
    assert len(enumerate_positive_cones(HAMILTON1)) == 2
    assert enumerate_positive_cones(AlgebraWithInvolution(QQ, "quat_symp", 2, a=1, b=1)) == []
    assert len(enumerate_positive_cones(SO2)) == 2
    theta_alg = AlgebraWithInvolution(SQRT2, "split_orth", 1)
    assert len(enumerate_positive_cones(theta_alg)) == 4


def test_formally_real():
    assert formally_real(HAMILTON1)
    assert not formally_real(AlgebraWithInvolution(QQ, "quat_symp", 1, a=1, b=1))
    assert formally_real(AlgebraWithInvolution(QQ, "split_orth", 1))


def test_positivity_sets():
    rep = positivity_sets(HAMILTON1)
    assert rep.x_sigma == list(QQ.orderings)
    assert rep.x_tilde == list(QQ.orderings)
    assert rep.ps_prime_holds and rep.ps_sufficient

    rep = positivity_sets(SO3)
    assert rep.x_sigma == list(QQ.orderings)
    assert rep.ps_prime_holds

    rep = positivity_sets(AlgebraWithInvolution(QQ, "quat_symp", 1, a=1, b=1))
    assert rep.x_tilde == []
    assert not formally_real(AlgebraWithInvolution(QQ, "quat_symp", 1, a=1, b=1))

    theta = SQRT2.gen
    mixed = AlgebraWithInvolution(SQRT2, "quat_symp", 1, a=-1, b=theta)
    rep = positivity_sets(mixed)
    assert {p.index for p in rep.x_tilde} == {0}
    assert rep.ps_prime_holds == ({p.index for p in rep.x_sigma} == {0})


def test_membership_respects_cone_axioms_sampled():
    rng = random.Random(62)
    for alg in (HAMILTON1, SO2, AlgebraWithInvolution(QQ, "quat_skew", 1, a=2, b=5)):
        cone = PositiveCone(alg, P0, 1)
        for _ in range(15):
            m1 = cone.sample_member(rng)
            m2 = cone.sample_member(rng)
            assert cone.contains(m1)
            assert cone.contains(m1 + m2)
            x = alg.element([[tuple(rng.randint(-2, 2) for _ in range(alg.entry_dim))
                              if alg.entry_dim > 1 else rng.randint(-2, 2)
                              for _ in range(alg.n)] for _ in range(alg.n)])
            assert cone.contains(x.conj_transpose() * m1 * x)
            if not m1.is_zero():
                assert not cone.contains(-m1)


def test_prepositive_axiom_reports():
    rng = random.Random(63)
    cone = PositiveCone(SO2, P0, 1)
    assert prepositive_axiom_check(cone, P0, rng).passed

    rng = random.Random(64)
    rep = prepositive_axiom_check(SymmetricSetCandidate(SO2), P0, rng)
    assert not rep.passed and rep.failed_axiom == "P5"

    rng = random.Random(65)
    rep = prepositive_axiom_check(UnionCandidate(cone), P0, rng)
    assert not rep.passed and rep.failed_axiom == "P2"


def test_cone_invertible_members_are_eta_maximal():
    rng = random.Random(66)
    for alg in (HAMILTON1, SO2):
        eta = reference_form(alg)
        for eps in (1, -1):
            cone = PositiveCone(alg, P0, eps, eta)
            hits = 0
            for _ in range(60):
                m = cone.sample_member(rng)
                if not is_invertible(m):
                    continue
                hits += 1
                if eps == 1:
                    assert eta_maximal(m, P0, eta)
                else:
                    assert eta_maximal(-m, P0, eta)
            assert hits > 10


def test_verify_certificate_examples():
    # u = 2 represented by x = 1 + i over the Hamilton quaternions
    u = HAMILTON1.scalar_element(2)
    x = HAMILTON1.element([[(1, 1, 0, 0)]])
    cert = SquareCertificate([CertTerm((), QQ.one, x, 0)])
    assert verify_certificate(u, HAMILTON1.one_element, [], 1, cert)

    # empty certificate verifies only u = 0
    assert verify_certificate(HAMILTON1.zero_element, HAMILTON1.one_element, [],
                              1, SquareCertificate([]))
    assert not verify_certificate(u, HAMILTON1.one_element, [], 1,
                                  SquareCertificate([]))

    # weight sqrt2 positive on Y = H(sqrt2)
    theta = SQRT2.gen
    rat2 = AlgebraWithInvolution(SQRT2, "split_orth", 1)
    x2 = rat2.element([[1 + 0 * theta]])
    target = rat2.scalar_element(theta)
    cert2 = SquareCertificate([CertTerm((0,), SQRT2.one, x2, 0)])
    assert verify_certificate(target, rat2.one_element, [theta], 1, cert2)


def test_verify_certificate_shape_errors():
    u = HAMILTON1.scalar_element(2)
    x = HAMILTON1.element([[(1, 1, 0, 0)]])
    with pytest.raises(ValueError):
        verify_certificate(u, HAMILTON1.one_element, [], 1,
                           SquareCertificate([CertTerm((), QQ.one, x, 5)]))
    with pytest.raises(ValueError):
        verify_certificate(u, HAMILTON1.one_element, [], 1,
                           SquareCertificate([CertTerm((2,), QQ.one, x, 0)]))
    with pytest.raises(ValueError):
        verify_certificate(u, HAMILTON1.one_element, [], 1,
                           SquareCertificate([CertTerm((), QQ.zero, x, 0)]))


def test_find_sos_rational_scalars():
    rat = AlgebraWithInvolution(QQ, "split_orth", 1)
    res = find_sos_certificate(rat.scalar_element(7))
    assert res.status == "certificate"
    vals = sorted(t.vector.rows[0][0].as_fraction() for t in res.certificate.terms)
    assert vals == [1, 1, 1, 2]
    assert verify_certificate(rat.scalar_element(7), rat.one_element, [], 4,
                              res.certificate)

    res = find_sos_certificate(rat.scalar_element(1))
    assert res.status == "certificate"
    assert verify_certificate(rat.scalar_element(1), rat.one_element, [],
                              len(res.certificate.terms), res.certificate)

    res = find_sos_certificate(rat.scalar_element(-3))
    assert res.status == "refuted"
    assert res.refutation.ordering == P0


def test_find_sos_matrix_constructive():
    u = SO2.element([[2, 1], [1, 2]])
    res = find_sos_certificate(u)
    assert res.status == "certificate"
    assert len(res.certificate.terms) <= 8
    assert verify_certificate(u, SO2.one_element, [], len(res.certificate.terms),
                              res.certificate)

    indef = SO2.element([[1, 2], [2, 1]])
    res = find_sos_certificate(indef)
    assert res.status == "refuted"
    assert sign_at(res.refutation.witness, P0) < 0

    singular = SO2.element([[1, 1], [1, 1]])
    res = find_sos_certificate(singular)
    assert res.status == "certificate"
    assert verify_certificate(singular, SO2.one_element, [],
                              len(res.certificate.terms), res.certificate)


def test_find_sos_search_path_hamilton():
    u = HAMILTON1.scalar_element(2)
    res = find_sos_certificate(u, height=1, max_terms=2)
    assert res.status == "certificate"
    assert verify_certificate(u, HAMILTON1.one_element, [],
                              len(res.certificate.terms), res.certificate)


def test_find_sos_with_pfister_weights():
    theta = SQRT2.gen
    rat2 = AlgebraWithInvolution(SQRT2, "split_orth", 1)
    target = rat2.scalar_element(theta)
    res = find_sos_certificate(target, slots=[theta], height=1, max_terms=2)
    assert res.status == "certificate"
    assert verify_certificate(target, rat2.one_element, [theta],
                              len(res.certificate.terms), res.certificate)
    # -theta is negative somewhere on Y = H(theta): refuted
    res = find_sos_certificate(rat2.scalar_element(-theta), slots=[theta],
                               height=1, max_terms=2)
    assert res.status == "refuted"


def test_find_sos_unknown_is_an_honest_outcome():
    u = HAMILTON1.scalar_element(7)
    res = find_sos_certificate(u, height=1, max_terms=1)
    assert res.status == "unknown"
    # with workable bounds the same target is certified
    res = find_sos_certificate(u, height=2, max_terms=2)
    assert res.status == "certificate"
    assert verify_certificate(u, HAMILTON1.one_element, [],
                              len(res.certificate.terms), res.certificate)


def test_not_formally_real_means_all_signatures_vanish():
    import random as _random

    from hermsig.hermitian import HermitianForm, reference_form, total_signature_h

    rng = _random.Random(13)
    allnil = AlgebraWithInvolution(QQ, "quat_symp", 1, a=1, b=1)
    eta = reference_form(allnil)
    for _ in range(50):
        coords = [rng.randint(-3, 3) for _ in range(4)]
        q = allnil.quat.element(*coords)
        gram = [[q + q.conj()]]
        h = HermitianForm(allnil, gram)
        assert all(v == 0 for _, v in total_signature_h(h, eta))
    # while a formally real instance carries a nonzero table
    eta_h = reference_form(HAMILTON1)
    assert any(v != 0 for _, v in total_signature_h(eta_h.form, eta_h))


def test_membership_matches_algebra_level_diagonalization():
    # the trace-carrier rule must agree with the pivot-sign rule of the
    # algebra-level congruence reduction for the hermitian families
    from hermsig.field import NumberField
    from hermsig.hermitian import HermitianForm, hermitian_diagonalize

    sqrt2 = NumberField([-2, 0, 1])
    theta = sqrt2.gen
    rng = random.Random(80)
    instances = [
        AlgebraWithInvolution(QQ, "quat_symp", 1, a=-1, b=-1),
        AlgebraWithInvolution(QQ, "unitary", 1, delta=-1),
        AlgebraWithInvolution(sqrt2, "quat_symp", 1, a=-1, b=-1),
        AlgebraWithInvolution(sqrt2, "unitary", 1, delta=theta - 3),
    ]
    for alg in instances:
        basis = alg.sym_basis()
        # rank-2 symmetric elements via hermitian Grams reread as elements
        eta = __import__("hermsig.hermitian", fromlist=["reference_form"]).reference_form(alg)
        for p in alg.nonnil_orderings():
            for eps in (1, -1):
                cone = PositiveCone(alg, p, eps, eta)
                want = eps * (1 if eta.certificate[p] > 0 else -1)
                for _ in range(15):
                    ed = alg.entry_dim
                    raw = [[alg.entry([rng.randint(-2, 2) for _ in range(ed)])
                            for _ in range(2)] for _ in range(2)]
                    ct = [[alg.entry_conj(raw[c][r]) for c in range(2)] for r in range(2)]
                    gram = [[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(raw, ct)]
                    form = HermitianForm(alg, gram)
                    pivots, _ = hermitian_diagonalize(form)
                    pivot_rule = all(want * sign_at(d, p) >= 0 for d in pivots)
                    # reread the Gram as a rank-2 "element" is not possible
                    # for n = 1; compare through the trace diagonal instead
                    from hermsig.hermitian import _trace_diag

                    carrier = all(want * sign_at(d, p) >= 0
                                  for d in _trace_diag(form, None))
                    assert carrier == pivot_rule


def test_totally_imaginary_field_has_no_cones():
    from hermsig.field import NumberField

    imag = NumberField([1, 0, 1])  # x^2 + 1
    alg = AlgebraWithInvolution(imag, "split_orth", 2)
    assert not formally_real(alg)
    assert enumerate_positive_cones(alg) == []
    rep = positivity_sets(alg)
    assert rep.x_sigma == [] and rep.x_tilde == []


def test_strongly_anisotropic_sufficient_flag():
    from hermsig.cones import strongly_anisotropic_flag
    from hermsig.hermitian import HermitianForm, reference_form

    eta = reference_form(HAMILTON1)
    assert strongly_anisotropic_flag(HermitianForm.diagonal(HAMILTON1, [1, 1]), eta)
    assert not strongly_anisotropic_flag(
        HermitianForm.diagonal(HAMILTON1, [1, -1]), eta)

    skew = AlgebraWithInvolution(QQ, "quat_skew", 1, a=1, b=1)
    eta_s = reference_form(skew)
    k = skew.quat.k
    definite = HermitianForm.diagonal(
        skew, [skew.scalar_element(k), skew.scalar_element(k)])
    assert strongly_anisotropic_flag(definite, eta_s)
    mixed = HermitianForm.diagonal(
        skew, [skew.scalar_element(k), skew.scalar_element(-k)])
    assert not strongly_anisotropic_flag(mixed, eta_s)

    # flag implies formal reality on samples
    allnil = AlgebraWithInvolution(QQ, "quat_symp", 1, a=1, b=1)
    eta_n = reference_form(allnil)
    assert not strongly_anisotropic_flag(
        HermitianForm.diagonal(allnil, [1, 1]), eta_n)
    assert not formally_real(allnil)
