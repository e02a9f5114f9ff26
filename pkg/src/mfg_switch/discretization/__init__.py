from .partition import EpsPartition, eps_argmin_map, eps_targets, round_instant

__all__ = ["EpsPartition", "eps_argmin_map", "eps_targets", "round_instant"]
