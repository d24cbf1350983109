# Copyright 2026 The Rodjoint Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Printable joints, rod cut plans and assembly order for rod-and-joint frames.

Documents are dicts of the form
``{"nodes": [[x, y, z], ...], "edges": [[i, j], ...], "params": {...}}``
and meshes are ``(vertices, faces)`` numpy array pairs.
"""

import json
import os

from . import _rodjoint
from ._rodjoint import RodjointError, is_solid, pack_cuts, safe_offset, stl_bytes, volume

__all__ = [
    "RodjointError",
    "Session",
    "assembly_order",
    "build_joint",
    "derive",
    "diagnose",
    "engrave",
    "export_all",
    "is_solid",
    "load_document",
    "normalize_document",
    "pack_cuts",
    "safe_offset",
    "stl_bytes",
    "volume",
]


def _text(document):
    return document if isinstance(document, str) else json.dumps(document)


def load_document(path):
    """Reads and validates a document file."""
    with open(path, encoding="utf-8") as f:
        return normalize_document(f.read())


def normalize_document(document):
    """Validates a document and fills in default parameters."""
    return json.loads(_rodjoint.normalize_document(_text(document)))


def derive(document):
    """Per-edge offsets and rod lengths."""
    return json.loads(_rodjoint.derive(_text(document)))


def build_joint(document, node):
    """Joint solid of one node as (vertices, faces)."""
    return _rodjoint.build_joint(_text(document), node)


def engrave(mesh, id, depth, seed=1, samples=10000, k=200, ao_rays=64):
    """Engraves a two-digit id into a solid; returns (mesh, site)."""
    vertices, faces = mesh
    return _rodjoint.engrave(vertices, faces, id, depth, seed, samples, k, ao_rays)


def assembly_order(document, start=None):
    """Assembly steps as ("joint", node) and ("rod", edge) pairs."""
    return _rodjoint.assembly_order(_text(document), start)


def diagnose(document):
    """Rod intersections, swallowed and degenerate parts and balance."""
    return json.loads(_rodjoint.diagnose(_text(document)))


def export_all(document, out_dir, seed=1, engrave_seed=1, engrave_ids=True, threads=0):
    """Writes joints, rods.csv, cut plan, assembly order and diagnostics."""
    os.makedirs(out_dir, exist_ok=True)
    _rodjoint.export_all(_text(document), os.fspath(out_dir), seed, engrave_seed, engrave_ids, threads)


class Session:
    """Session protocol endpoint taking and returning dicts."""

    def __init__(self):
        self._session = _rodjoint.Session()

    @property
    def revision(self):
        return self._session.revision

    def request(self, op, args=None, id=None):
        message = {"id": id, "op": op, "args": args or {}}
        return json.loads(self._session.handle(json.dumps(message)))
