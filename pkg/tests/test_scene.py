import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crackdsm.errors import DomainError, SceneError
from crackdsm.scene import (Crack, Scene, crack_endpoints, crack_tangent,
                            sample_scene, validate_scene)


def test_tangent_axis_aligned():
    assert np.allclose(crack_tangent(Crack((0, 0), 1.0, 0.0)), [1, 0])
    assert np.allclose(crack_tangent(Crack((0, 0), 1.0, math.pi / 2)), [0, 1])
    assert np.allclose(crack_tangent(Crack((0, 0), 1.0, math.pi / 4)),
                       [math.sqrt(2) / 2, math.sqrt(2) / 2])


def test_endpoints_simple():
    a, b = crack_endpoints(Crack((0, 0), 1.0, 0.0))
    assert np.allclose(a, [-1, 0]) and np.allclose(b, [1, 0])
    # first benchmark crack: [s + 0.6, 0.2] with half-length 0.05
    a, b = crack_endpoints(Crack((0.6, 0.2), 0.05, 0.0))
    assert np.allclose(a, [0.55, 0.2]) and np.allclose(b, [0.65, 0.2])


@given(cx=st.floats(-5, 5), cy=st.floats(-5, 5),
       half=st.floats(1e-3, 1.9), rot=st.floats(-10, 10))
@settings(max_examples=100, deadline=None)
def test_endpoint_properties(cx, cy, half, rot):
    crack = Crack((cx, cy), half, rot)
    a, b = crack_endpoints(crack)
    assert np.linalg.norm(b - a) == pytest.approx(2 * half, rel=1e-12)
    assert np.allclose(0.5 * (a + b), [cx, cy], atol=1e-12)
    assert np.linalg.norm(crack_tangent(crack)) == pytest.approx(1.0, abs=1e-14)


def test_rotation_by_pi_swaps_endpoints():
    crack = Crack((0.3, -0.1), 0.2, 0.7)
    flipped = Crack((0.3, -0.1), 0.2, 0.7 + math.pi)
    assert np.allclose(crack_tangent(flipped), -crack_tangent(crack))
    a, b = crack_endpoints(crack)
    fa, fb = crack_endpoints(flipped)
    assert np.allclose(a, fb) and np.allclose(b, fa)


def test_invalid_cracks_rejected():
    with pytest.raises(SceneError):
        Crack((0, 0), 0.0, 0.0)
    with pytest.raises(SceneError):
        Crack((0, 0), -0.1, 0.0)
    with pytest.raises(SceneError):
        Scene((Crack((0, 0), 0.1, 0.0), Crack((0, 0), 0.2, 1.0)))


def test_validate_scene_clean_pair():
    sc = Scene((Crack((0, 0), 0.01, 0.0), Crack((1, 0), 0.01, 0.3)))
    assert validate_scene(sc, 10.0) == []


def test_validate_scene_separation_violation():
    sc = Scene((Crack((0, 0), 0.01, 0.0), Crack((0.05, 0), 0.01, 0.3)))
    out = validate_scene(sc, 10.0)  # k * dist = 0.5 < 3/4
    assert len(out) == 1
    assert out[0].kind == "separation" and out[0].severity == "error"
    assert out[0].value == pytest.approx(0.5)


def test_validate_scene_size_warning_and_error():
    k = 10.0
    warn = Scene((Crack((0, 0), 0.07, 0.0),))  # k*l = 0.7
    assert validate_scene(warn, k) == []
    warnings = validate_scene(warn, k, include_warnings=True)
    assert [v.severity for v in warnings] == ["warning"]
    hard = Scene((Crack((0, 0), 0.25, 0.0),))  # k*l = 2.5
    assert [v.severity for v in validate_scene(hard, k)] == ["error"]


def test_validate_scene_rejects_bad_wavenumber():
    with pytest.raises(DomainError):
        validate_scene(Scene(()), 0.0)


def test_benchmark_scene_passes_at_half_wavelength():
    k = 2 * math.pi / 0.5
    assert validate_scene(sample_scene(), k) == []


def test_benchmark_scene_geometry():
    sc = sample_scene()
    c1, c2, c3 = (np.asarray(c.center) for c in sc.cracks)
    assert np.allclose(c1, [0.6, 0.2])
    assert np.allclose(c2, [-0.05 / math.sqrt(2), -0.75 / math.sqrt(2)])
    r = 7 * math.pi / 6
    expect3 = [math.cos(r) * -0.25 - math.sin(r) * 0.6,
               math.sin(r) * -0.25 + math.cos(r) * 0.6]
    assert np.allclose(c3, expect3)
    assert sc.cracks[1].rotation == pytest.approx(math.pi / 2)


def test_validation_order_invariant():
    k = 9.0
    cracks = (Crack((0, 0), 0.01, 0.0), Crack((0.04, 0), 0.01, 0.1),
              Crack((2, 2), 0.3, 0.2))
    fwd = validate_scene(Scene(cracks), k)
    rev = validate_scene(Scene(cracks[::-1]), k)
    assert sorted((v.kind, v.severity, round(v.value, 12)) for v in fwd) == \
        sorted((v.kind, v.severity, round(v.value, 12)) for v in rev)
