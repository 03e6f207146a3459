"""Structural checks of the built-in scenarios.

Prints the frame class, naturality flags and group-affine residual of each
model. The inertial model carries a gyro bias inside the rotation update, so
its frame map is not natural and the residual is large.
"""
from twoframes.scenarios import ScenarioConfig, build_inertial_nav, build_lever_arm_car, build_slammot, nav_truth
from twoframes.system import validate_system

cfg = ScenarioConfig(duration_s=5.0)
truth = nav_truth(cfg)
systems = [
    build_lever_arm_car(ScenarioConfig(id="lever_arm_car", duration_s=5.0)),
    build_slammot(ScenarioConfig(id="slammot", duration_s=5.0)),
    build_slammot(ScenarioConfig(id="slammot", duration_s=5.0, singer=True)),
    build_inertial_nav(cfg, truth.gyro, truth.acc),
]
for s in systems:
    rep = validate_system(s)
    print(f"{s.name:<34} {rep['frame_class'].name:<11} vector natural={rep['vector_natural']!s:<5}"
          f" outputs natural={rep['outputs_natural']!s:<5} residual={rep['group_affine_residual']:.1e}")
