import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topogates.errors import ArchitectureViolation, ZeroCoupling
from topogates.gates import equal_up_to_phase, hadamard, ry, rz
from topogates.spinline import (
    ACLineSpec,
    Architecture,
    SpinProgram,
    SpinSegment,
    ac_line_phase,
    compile_su2,
    holonomy,
    segment_rotation,
)

from oracles import exp_rotation, haar_unitary

FLY, STAT = Architecture.FLYING, Architecture.STATIC


def expm_segment(seg, kappa=1.0):
    v = np.cross(seg.E, seg.dl)
    return exp_rotation(tuple(kappa * v), 1.0)


class TestSegmentRotation:
    def test_ez_gives_ry(self):
        seg = SpinSegment((math.pi / 2, 0, 0), (0, 0, 1))
        assert np.allclose(expm_segment(seg), [[0, 1], [-1, 0]], atol=1e-14)
        assert np.abs(segment_rotation(seg) - np.array([[0, 1], [-1, 0]])).max() < 1e-15
        assert np.abs(segment_rotation(seg) - ry(math.pi / 2)).max() < 1e-15

    def test_parallel_field_is_identity(self):
        assert np.array_equal(segment_rotation(SpinSegment((0, 0, 2.0), (0, 0, 5.0))), np.eye(2))

    def test_ey_gives_rz_negative(self):
        seg = SpinSegment((1, 0, 0), (0, 1, 0))
        assert np.abs(expm_segment(seg) - rz(-1.0)).max() < 1e-14
        assert np.abs(segment_rotation(seg) - rz(-1.0)).max() < 1e-15

    @settings(max_examples=200)
    @given(st.lists(st.floats(-3, 3), min_size=7, max_size=7))
    def test_matches_expm_generally(self, xs):
        seg = SpinSegment(np.array(xs[:3]) + [0, 0, 0.01 + abs(xs[0])], xs[3:6])
        kappa = xs[6]
        assert np.abs(segment_rotation(seg, kappa) - expm_segment(seg, kappa)).max() < 1e-12

    def test_reversal_inverts(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            dl, e = rng.standard_normal(3), rng.standard_normal(3)
            u = segment_rotation(SpinSegment(dl, e), 0.7)
            back = segment_rotation(SpinSegment(-dl, e), 0.7)
            assert np.abs(back @ u - np.eye(2)).max() < 1e-12

    def test_zero_displacement_rejected(self):
        with pytest.raises(ValueError):
            SpinSegment((0, 0, 0), (1, 0, 0))


class TestHolonomy:
    def test_empty(self):
        assert np.array_equal(holonomy(SpinProgram()), np.eye(2))

    def test_euler_order(self):
        alpha, theta, beta = 0.4, 1.1, -0.8
        segs = [
            SpinSegment((1, 0, 0), (0, -beta, 0)),
            SpinSegment((1, 0, 0), (0, 0, theta)),
            SpinSegment((1, 0, 0), (0, -alpha, 0)),
        ]
        expected = exp_rotation("z", alpha) @ exp_rotation("y", theta) @ exp_rotation("z", beta)
        assert np.abs(holonomy(SpinProgram(segs, FLY)) - expected).max() < 1e-13

    def test_split_into_seven(self):
        seg = SpinSegment((2.3, 0, 0), (0, 0.4, -0.9))
        pieces = seg.split([0.3, 1.7, 0.05, 2.2, 0.9, 0.4, 1.1])
        assert np.allclose(sum(p.dl for p in pieces), seg.dl)
        whole = holonomy(SpinProgram([seg], FLY))
        assert np.abs(holonomy(SpinProgram(pieces, FLY)) - whole).max() < 1e-12

    def test_det_one(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            segs = [SpinSegment((0, *rng.standard_normal(2)), (rng.standard_normal(), 0, 0)) for _ in range(5)]
            u = holonomy(SpinProgram(segs, STAT, 1.3))
            assert abs(np.linalg.det(u) - 1) < 1e-12
            assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-12

    @pytest.mark.parametrize(
        "arch, dl, e",
        [
            (FLY, (-1, 0, 0), (0, 1, 0)),
            (FLY, (1, 0.5, 0), (0, 1, 0)),
            (FLY, (1, 0, 0), (1, 1, 0)),
            (STAT, (0, 1, 0), (1, 1, 0)),
            (STAT, (1, 1, 0), (1, 0, 0)),
        ],
    )
    def test_architecture_violations(self, arch, dl, e):
        with pytest.raises(ArchitectureViolation):
            holonomy(SpinProgram([SpinSegment(dl, e)], arch))

    def test_el_product(self):
        seg = SpinSegment((1.7, 0, 0), (0, 0.3, 0.8))
        base = segment_rotation(seg, 0.9)
        for s in (0.1, 0.37, 2.0, 10.0):
            scaled = SpinSegment(seg.dl / s, seg.E * s)
            assert np.abs(segment_rotation(scaled, 0.9) - base).max() < 1e-12


class TestCompile:
    def test_hadamard_flying(self):
        prog = compile_su2(hadamard(), FLY, 1.0)
        assert len(prog.segments) == 2
        assert equal_up_to_phase(holonomy(prog), hadamard(), 1e-10)

    def test_identity_is_empty(self):
        assert compile_su2(np.eye(2), STAT, 1.0).segments == ()

    def test_static_rz(self):
        prog = compile_su2(rz(1.0), STAT, 2.0, field_strength=1.0)
        assert len(prog.segments) == 1
        seg = prog.segments[0]
        # angle = kappa * E * L  =>  L = 1.0 / (2 * 1) = 0.5
        assert np.linalg.norm(seg.dl) == pytest.approx(0.5)
        assert seg.dl[1] != 0 and seg.dl[2] == 0
        assert np.abs(holonomy(prog) - rz(1.0)).max() < 1e-12

    def test_static_ry_moves_along_z(self):
        prog = compile_su2(ry(0.6), STAT, 1.0)
        assert len(prog.segments) == 1 and prog.segments[0].dl[2] != 0

    def test_flying_fields(self):
        prog = compile_su2(rz(0.3) @ ry(0.5) @ rz(-0.2), FLY, 0.5, length=2.0)
        for seg in prog.segments:
            assert np.array_equal(seg.dl, [2.0, 0, 0])
        assert equal_up_to_phase(holonomy(prog), rz(0.3) @ ry(0.5) @ rz(-0.2), 1e-12)

    def test_zero_coupling(self):
        with pytest.raises(ZeroCoupling):
            compile_su2(hadamard(), FLY, 0.0)

    @settings(max_examples=200)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(list(Architecture)),
           st.floats(-5, 5).filter(lambda k: abs(k) > 1e-3))
    def test_roundtrip(self, seed, arch, kappa):
        u = haar_unitary(np.random.default_rng(seed))
        assert equal_up_to_phase(holonomy(compile_su2(u, arch, kappa)), u, 1e-10)

    def test_json(self):
        prog = compile_su2(hadamard(), STAT, 1.5)
        text = prog.to_json()
        assert text.startswith('{"arch": "static", "kappa": 1.5, "segments": [{"dl": [')
        back = SpinProgram.from_json(text)
        assert np.array_equal(holonomy(back), holonomy(prog))


class TestACLine:
    def test_zero_class(self):
        assert ac_line_phase(ACLineSpec(2.0, 3.0, 0)) == 0.0

    def test_quarter_product(self):
        assert ac_line_phase(ACLineSpec(0.5, 0.5, 1)) == pytest.approx(math.pi)

    def test_linear_in_n(self):
        assert ac_line_phase(ACLineSpec(1.0, 0.25, -2)) == pytest.approx(-2 * math.pi)

    def test_integer_class(self):
        with pytest.raises(ValueError):
            ACLineSpec(1.0, 1.0, 0.5)
