from .mass_field import MassField, check_conservation, field_l2_distance
from .step_profile import StepProfile, l2_distance, time_integral

__all__ = [
    "MassField",
    "StepProfile",
    "check_conservation",
    "field_l2_distance",
    "l2_distance",
    "time_integral",
]
