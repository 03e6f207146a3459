import numpy as np
import pytest

from twoframes.group import TfgElement, TfgShape, compose, distance, identity, inverse, random_element
from twoframes.lie import exp_rot, random_rotation
from twoframes.system import (
    FrameClass,
    FrameMismatch,
    GenericFrame,
    NaturalFrame,
    OutputModel,
    TwoFramesSystem,
    VectorDynamics,
    apply_vector_dynamics,
    check_commutation,
    check_group_affine,
    check_natural_frame,
    check_vector_natural,
    evaluate_output,
    random_natural_system,
    random_shape,
    stack_outputs,
    validate_system,
)


class TestCommutation:
    @pytest.mark.parametrize("d", [2, 3])
    def test_scalar_blocks_commute(self, rng, d):
        M = np.kron(rng.standard_normal((2, 3)), np.eye(d))
        res = check_commutation(M, d, rng=rng)
        assert res and res.block_structure and res.residual < 1e-12

    def test_generic_matrix_fails(self, rng):
        res = check_commutation(rng.standard_normal((3, 3)), 3, rng=rng)
        assert not res and res.residual > 1e-3

    def test_planar_rotation_commutes(self, rng):
        # In 2D a rotation block commutes with every rotation but is not scalar
        res = check_commutation(4.0 * random_rotation(2, rng), 2, rng=rng)
        assert res and not res.block_structure

    def test_wrong_size(self):
        assert not check_commutation(np.eye(4), 3)

    def test_empty(self):
        assert check_commutation(np.zeros((3, 0)), 3)


class TestFrameClass:
    @pytest.mark.parametrize(
        "shape,O_id,W_id,expected",
        [
            (TfgShape(3, 2, 0), True, False, FrameClass.CaseB),
            (TfgShape(3, 0, 2), False, True, FrameClass.CaseA),
            (TfgShape(3, 1, 1), True, True, FrameClass.CaseC),
            (TfgShape(3, 1, 1), False, True, FrameClass.NotNatural),
            (TfgShape(3, 1, 1), True, False, FrameClass.NotNatural),
            (TfgShape(2, 1, 1), False, False, FrameClass.Abelian),
        ],
    )
    def test_cases(self, rng, shape, O_id, W_id, expected):
        d = shape.d
        O = np.eye(d) if O_id else random_rotation(d, rng)
        W = np.eye(d) if W_id else random_rotation(d, rng)
        assert check_natural_frame(NaturalFrame(O, W), shape) is expected

    def test_generic_is_not_natural(self):
        fd = GenericFrame(lambda chi: chi.R)
        assert check_natural_frame(fd, TfgShape(3, 1, 1)) is FrameClass.NotNatural
        assert not FrameClass.NotNatural.natural


class TestOutputs:
    def test_fixed_and_body(self, rng):
        chi = random_element(TfgShape(3, 1, 1), rng)
        b = rng.standard_normal(3)
        fixed = OutputModel("fixed", np.eye(3), np.zeros((3, 3)), b)
        body = OutputModel("body", np.eye(3), np.zeros((3, 3)), b)
        np.testing.assert_allclose(evaluate_output(fixed, chi), chi.x + chi.R @ b)
        np.testing.assert_allclose(evaluate_output(body, chi), chi.R.T @ (b - chi.x))
        assert fixed.side == "left" and body.side == "right"

    def test_stack_rejects_mixed(self):
        a = OutputModel("fixed", np.eye(3), np.zeros((3, 3)), np.zeros(3))
        b = OutputModel("body", np.eye(3), np.zeros((3, 3)), np.zeros(3))
        with pytest.raises(FrameMismatch):
            stack_outputs([a, b])
        assert stack_outputs([a, a]).dim == 6

    def test_bad_frame_name(self):
        with pytest.raises(ValueError):
            OutputModel("world", np.eye(3), np.zeros((3, 3)), np.zeros(3))


class TestGroupAffine:
    @pytest.mark.parametrize("seed", range(8))
    def test_random_natural_systems(self, seed):
        rng = np.random.default_rng(seed)
        shape = random_shape(rng)
        system = random_natural_system(shape, seed)
        assert check_group_affine(system.phi(0), shape, rng=rng) < 1e-10
        report = validate_system(system)
        assert report["vector_natural"] and report["outputs_natural"] and report["frame_natural"]
        assert system.vector_natural and system.frame_natural

    def test_non_natural_vector_dynamics(self, rng):
        shape = TfgShape(3, 1, 0)
        vd = VectorDynamics.identity(shape)
        vd = VectorDynamics(**{**vd.__dict__, "F": np.diag([1.0, 2.0, 3.0])})
        assert not check_vector_natural(vd, 3)
        system = TwoFramesSystem(shape, lambda n: (vd, NaturalFrame(np.eye(3), np.eye(3))))
        assert check_group_affine(system.phi(0), shape, rng=rng) > 1e-3

    def test_vector_dynamics_formula(self, rng):
        shape = TfgShape(3, 1, 1)
        chi = random_element(shape, rng)
        u = rng.standard_normal(3)
        vd = VectorDynamics(
            np.eye(3), np.eye(3), np.zeros(3), np.zeros(3), np.eye(3), np.zeros((3, 3)), np.zeros(3), u
        )
        out = apply_vector_dynamics(vd, chi)
        np.testing.assert_allclose(out.x, chi.x + chi.R @ chi.X)
        np.testing.assert_allclose(out.X, chi.X + chi.R.T @ u)

    def test_shape_check(self):
        from twoframes.group import ShapeMismatch

        with pytest.raises(ShapeMismatch):
            VectorDynamics.identity(TfgShape(3, 1, 1)).check_shape(TfgShape(3, 2, 1))

    def test_phi_of_identity_relation(self, rng):
        # group-affine maps satisfy phi(a) = phi(Id) o phi(Id)^-1 o phi(a) trivially; check a nontrivial one
        shape = TfgShape(2, 2, 1)
        system = random_natural_system(shape, 3)
        phi = system.phi(5)
        a = random_element(shape, rng)
        lhs = phi(compose(a, inverse(a)))
        assert distance(lhs, phi(identity(shape))) < 1e-12

    def test_step_dependence_on_seed_only(self):
        s = TfgShape(3, 1, 1)
        a, b = random_natural_system(s, 7), random_natural_system(s, 7)
        chi = TfgElement(exp_rot([0.1, 0.2, 0.3]), np.ones(3), np.ones(3))
        assert distance(a.step(chi, 4), b.step(chi, 4)) == 0.0
