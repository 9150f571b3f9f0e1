import pytest
from hypothesis import given, settings

from gen import compose_word, seeds, tame_word
from polyauto.automorphism import PolyMap, compose_factors, nagata
from polyauto.replay import ReplayError, replay_tame, replay_witness
from polyauto.ring import Frac, RingElem
from polyauto.tameness import (
    NotAnAutomorphismError,
    NotTameWitness,
    TameCertificate,
    certificate_factors,
    recompose,
    tame_check,
    tdeg,
    verify_certificate,
)

T = RingElem((0, 1))


@settings(max_examples=120, deadline=None)
@given(seeds)
def test_tame_round_trip(rng):
    F = compose_word(tame_word(rng))
    cert = tame_check(F)
    assert isinstance(cert, TameCertificate)
    assert recompose(cert) == F
    assert verify_certificate(cert) and replay_tame(cert)
    assert compose_factors(certificate_factors(cert), 2) == F
    assert all(s.tdeg_after < s.tdeg_before for s in cert.steps if s.kind != "swap")


def test_nagata_not_tame_over_ring():
    w = tame_check(nagata())
    assert isinstance(w, NotTameWitness)
    assert w.failed_step == 6
    assert w.required_constant == Frac(-1, T)
    assert w.recheck() and replay_witness(w)
    assert not w.manual_review


def test_nagata_tame_over_field():
    cert = tame_check(nagata(), field=True)
    assert isinstance(cert, TameCertificate) and cert.field
    assert recompose(cert) == nagata()
    assert any(f.over_field for f in certificate_factors(cert))


def test_unit_ideal_completion():
    # leading coefficients 2t+2 and 4t+5 generate Z[t] without either dividing the other
    F = PolyMap.parse("(-(4*t+5)*X^2 + 2*X + (4*t+5)*Y, -(2*t+2)*X^2 + X + (2*t+2)*Y)")
    cert = tame_check(F)
    assert isinstance(cert, TameCertificate) and recompose(cert) == F


def test_proper_ideal_blocks_affine_step():
    # h2 = (t/2) h1 with (2, t) a proper ideal: no affine map over Z[t] lowers tdeg
    F = PolyMap.parse("(2*X^2 + Y, t*X^2 + X)")
    w = tame_check(F)
    assert isinstance(w, NotTameWitness) and w.failed_step == 4 and not w.manual_review


def test_field_mode_rejects_non_automorphism():
    with pytest.raises(NotAnAutomorphismError):
        tame_check(PolyMap.parse("(X^2, Y)"), field=True)


def test_ring_mode_needs_integral_input():
    with pytest.raises(ValueError):
        tame_check(PolyMap.parse("(X + Y^2/t, Y)"))


def test_tdeg():
    assert tdeg(nagata()) == 6
    assert tdeg(PolyMap.parse("(X, Y)")) == 2


def test_tampered_certificate_is_rejected():
    F = PolyMap.parse("(X + Y^3, Y + 2*(X + Y^3)^2)")
    cert = tame_check(F)
    bad = TameCertificate(cert.original, cert.steps[:-1], cert.terminal, cert.field)
    with pytest.raises(ReplayError):
        replay_tame(bad)
