"""Multi-feature multiple-object tracking.

Cost fusion, rectangular assignment, constant-velocity Kalman filtering,
tracking over detection sequences, background subtraction and CLEAR MOT
evaluation, backed by the C++ core.
"""

from ._mftrack import (
    KalmanState,
    color_cost,
    detect_foreground,
    evaluate,
    extract_histogram,
    final_cost,
    fused_cost,
    iou,
    kalman_box,
    kalman_init,
    kalman_predict,
    kalman_update,
    label_cost,
    learn_background,
    mean_box_distance,
    reid_cost,
    solve_assignment,
    spatial_cost,
    track_sequence,
)
from ._mftrack import __version__

__all__ = [
    "KalmanState",
    "__version__",
    "color_cost",
    "detect_foreground",
    "evaluate",
    "extract_histogram",
    "final_cost",
    "fused_cost",
    "iou",
    "kalman_box",
    "kalman_init",
    "kalman_predict",
    "kalman_update",
    "label_cost",
    "learn_background",
    "mean_box_distance",
    "reid_cost",
    "solve_assignment",
    "spatial_cost",
    "track_sequence",
]
