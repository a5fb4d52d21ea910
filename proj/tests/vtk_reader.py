"""Read an initial droplet snapshot with meshio and compare it with the exact data."""

import sys

import meshio
import numpy as np

mesh = meshio.read(sys.argv[1])
pts = mesh.points
u = np.ravel(mesh.point_data["u"])
expected = 2.0 * np.exp(-80.0 * (pts[:, 0] ** 2 + pts[:, 1] ** 2))
assert pts.shape == (175, 3), pts.shape
assert len(mesh.cells) == 1 and mesh.cells[0].type == "triangle" and len(mesh.cells[0].data) == 288
assert np.all(np.abs(u - expected) <= 4e-16 * np.maximum(1.0, np.abs(expected))), np.max(np.abs(u - expected))
assert "w" in mesh.point_data
print("ok")
