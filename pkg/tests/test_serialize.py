import json

import pytest
from hypothesis import given, settings

from gen import compose_word, random_spec, seeds, tame_word
from polyauto.automorphism import PolyMap, elementary
from polyauto.length import length_decompose
from polyauto.parse import parse_poly
from polyauto.replay import ReplayError, replay_length, replay_stable, replay_tame, replay_witness
from polyauto.serialize import FormatError, dumps, factor_from_dict, factor_to_dict, loads, to_dict
from polyauto.reproduce import NAGATA_PRINTED, example5_spec
from polyauto.structure import stable_tame_pipeline
from polyauto.tameness import TameCertificate, tame_check

NAGATA = PolyMap.parse(NAGATA_PRINTED)
COMMON = {"format", "version", "kind", "variables", "original"}


def _round_trip(obj, original=None):
    text = dumps(obj, original)
    back = loads(text)
    if original is not None:
        back, orig = back
        assert orig == original
        assert dumps(back, orig) == text
    else:
        assert dumps(back) == text
    return back


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_tame_certificate_round_trip(rng):
    F = compose_word(tame_word(rng, max_factors=4, degree_budget=12))
    cert = tame_check(F)
    assert isinstance(cert, TameCertificate)
    back = _round_trip(cert)
    assert replay_tame(back)
    assert set(to_dict(cert)) == COMMON | {"field", "steps", "terminal"}


def test_witness_round_trip():
    w = tame_check(NAGATA)
    back = _round_trip(w)
    assert replay_witness(back)
    assert back.failed_step == w.failed_step and back.manual_review == w.manual_review
    assert set(to_dict(w)) == COMMON | {"failed_step", "reason", "required_constant", "manual_review", "steps",
                                        "stuck_map"}


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_length_round_trip(rng):
    F = compose_word(tame_word(rng, max_factors=4, degree_budget=12))
    dec = length_decompose(F)
    back = _round_trip(dec, F)
    assert replay_length(back, F) and back.length == dec.length


def test_length_needs_original():
    with pytest.raises(FormatError):
        to_dict(length_decompose(NAGATA))


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_stable_certificate_round_trip(rng):
    cert = stable_tame_pipeline(random_spec(rng))
    back = _round_trip(cert)
    assert replay_stable(back)
    assert {"added_variables", "chain", "residual", "residual_length", "factorization"} <= set(to_dict(cert))


def test_field_factor_round_trip():
    f = elementary(2, 0, parse_poly("(Y^2 + t*Y)/(t + 1)", ("X", "Y")))
    assert factor_from_dict(json.loads(json.dumps(factor_to_dict(f)))) == f


def test_rejects_foreign_documents():
    with pytest.raises(FormatError):
        loads(json.dumps({"format": "other", "version": 1}))
    d = json.loads(dumps(tame_check(NAGATA)))
    d["kind"] = "mystery"
    with pytest.raises(FormatError):
        loads(json.dumps(d))


# -- tampering ------------------------------------------------------------------


def test_tampered_terminal_fails_replay():
    cert = tame_check(PolyMap.parse("(X + Y^2, Y)"))
    d = json.loads(dumps(cert))
    d["terminal"] = "(X + 1, Y)"
    with pytest.raises(ReplayError):
        replay_tame(loads(json.dumps(d)))


def test_tampered_length_factor_fails_replay():
    F = NAGATA
    d = json.loads(dumps(length_decompose(F), F))
    d["factors"][0]["map"] = d["factors"][0]["map"].replace("^2", "^3", 1)
    dec, orig = loads(json.dumps(d))
    with pytest.raises(ReplayError):
        replay_length(dec, orig)


def test_tampered_chain_fails_replay():
    d = json.loads(dumps(stable_tame_pipeline(example5_spec())))
    step = d["chain"][1]
    step["result"] = step["result"].replace("X", "(X + 1)", 1)
    with pytest.raises(ReplayError):
        replay_stable(loads(json.dumps(d)))
