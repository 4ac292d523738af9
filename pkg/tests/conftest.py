from __future__ import annotations

import pytest

from urnlab.io import bundled_model_names, load_bundled
from urnlab.model import ReplacementMatrix, Scheme, UrnModel, classify, embed_unordered_to_ordered, validate_tenability


def linear_fixture_names() -> list[str]:
    out = []
    for name in bundled_model_names():
        model = load_bundled(name)
        if classify(model.matrix).linear and validate_tenability(model.matrix):
            out.append(name)
    return out


def rescheme(model: UrnModel, scheme: Scheme) -> UrnModel:
    mat = model.matrix
    return UrnModel(ReplacementMatrix(mat.r, mat.m, scheme, mat.rows), model.initial)


def scheme_variants(model: UrnModel) -> dict[Scheme, UrnModel]:
    """The same rows under every scheme they make sense for, tenable ones only."""
    out = {}
    if model.scheme.ordered:
        for s in (Scheme.MSEQ, Scheme.RSEQ):
            out[s] = rescheme(model, s)
    else:
        for s in (Scheme.M, Scheme.R):
            u = rescheme(model, s)
            out[s] = u
            out[s.as_ordered] = u.with_matrix(embed_unordered_to_ordered(u.matrix))
    return {s: v for s, v in out.items() if validate_tenability(v.matrix)}


LINEAR_FIXTURES = linear_fixture_names()


@pytest.fixture(params=LINEAR_FIXTURES)
def linear_fixture(request) -> UrnModel:
    return load_bundled(request.param)


# one line per acceptance criterion, echoed again in the terminal summary
ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(ACCEPTANCE_RESULTS[n])
