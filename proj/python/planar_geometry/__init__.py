# Copyright 2026 The planar-geometry Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plane geometry, view consistency and evaluation primitives.

Depth maps are 2-D float arrays in meters with 0 marking a missing value.
Masks are 2-D boolean arrays and segmentations 2-D uint16 label arrays.
Failures raise PlanarError, whose ``kind`` attribute names the category.
"""

from planar_geometry._core import (
    NON_PLANAR,
    Intrinsics,
    Plane,
    PlanarError,
    Pose,
    check_warping_gradient,
    cluster_anchors,
    clustering_metrics,
    decode_normal,
    depth_metrics,
    encode_normal,
    extract_planes,
    fit_plane,
    mask_iou,
    offset_from_depth,
    project,
    recall_curve,
    render_plane,
    unproject,
    warping_loss,
    warping_loss_grad,
)

__version__ = "1.0.0"

__all__ = [
    "NON_PLANAR",
    "Intrinsics",
    "Plane",
    "PlanarError",
    "Pose",
    "check_warping_gradient",
    "cluster_anchors",
    "clustering_metrics",
    "decode_normal",
    "depth_metrics",
    "encode_normal",
    "extract_planes",
    "fit_plane",
    "mask_iou",
    "offset_from_depth",
    "project",
    "recall_curve",
    "render_plane",
    "unproject",
    "warping_loss",
    "warping_loss_grad",
]
