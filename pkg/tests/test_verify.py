import numpy as np
import pytest

from realpw import make_grid, sample_builtin
from realpw.verify import (verify_corpus, run_matrix, matrix_failed,
                           CorpusMember, check_limit_vs_R, check_liminf,
                           aligned_h)
from realpw.poly import parse_poly


def test_aligned_h_places_edge_between_cells():
    M = 1024
    h = aligned_h(M, 1.0, 8)
    dlam = 2 * np.pi / (M * h)
    assert 8.5 * dlam == pytest.approx(1.0, rel=1e-12)


def under_resolved_member():
    """Sharp spatial bump: its spectrum reaches the Nyquist shells."""
    grid = make_grid(1, 256, 0.1)
    f = sample_builtin({"kind": "spatial_bump",
                        "support": {"shape": "box", "lo": [-1.0], "hi": [1.0]},
                        "edge_width": 0.15}, grid)
    return CorpusMember("under-resolved", f, (parse_poly("x1", 1),), (2,))


def test_under_resolved_rows_are_skipped():
    member = under_resolved_member()
    status, detail = check_limit_vs_R(member, n_max=16)
    assert status == "skip"
    assert "boundary" in detail
    status, _ = check_liminf(member, n_max=16)
    assert status == "skip"


def test_matrix_reports_skip_not_fail():
    matrix = run_matrix(members=[under_resolved_member()], n_max=16)
    assert not matrix_failed(matrix)
    assert matrix["limit_vs_R"]["under-resolved"][0] == "skip"


def test_thread_fanout_matches_sequential():
    members = verify_corpus()[:1]
    seq = run_matrix(members=members, n_max=16, threads=1)
    par = run_matrix(members=members, n_max=16, threads=4)
    assert {k: {m: s for m, (s, _) in row.items()} for k, row in seq.items()} == \
           {k: {m: s for m, (s, _) in row.items()} for k, row in par.items()}


def test_badly_aligned_member_fails_matrix():
    # unaligned support edge leaves a barely-weighted boundary cell: the
    # limit visibly undershoots R at n=64 and the matrix must say so
    grid = make_grid(1, 1024, 0.05)
    f = sample_builtin({"kind": "spectral_bump",
                        "support": {"shape": "box", "lo": [-1.0], "hi": [1.0]}}, grid)
    member = CorpusMember("unaligned", f, (parse_poly("x1", 1),), (2,))
    matrix = run_matrix(members=[member], properties={"limit_vs_R": check_limit_vs_R})
    assert matrix["limit_vs_R"]["unaligned"][0] == "fail"
    assert matrix_failed(matrix)
