import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from weakbem.exceptions import CapacityError, ContractViolationError, MeshError
from weakbem.geometry.icosphere import build_icosphere, refinement_level_for_h
from weakbem.geometry.mesh import Mesh, classify_pair, mesh_stats
from weakbem.geometry.mesh_io import read_mesh, write_mesh
from weakbem.models.enums import PairTag

REFERENCE_VERTICES = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def _tetrahedron():
    vertices = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    triangles = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
    return vertices, triangles


class TestIcosphere:
    @pytest.mark.parametrize("level", [0, 1, 2, 3])
    def test_counts(self, level):
        mesh = build_icosphere(level)
        assert mesh.n_triangles == 20 * 4 ** level
        assert mesh.n_vertices == 10 * 4 ** level + 2

    def test_level0_edge_length(self):
        expected = 4.0 / math.sqrt(10.0 + 2.0 * math.sqrt(5.0))
        assert_allclose(build_icosphere(0).h_max, expected, rtol=1e-12)
        assert_allclose(build_icosphere(0).h_max, 1.05146, atol=1e-5)

    @pytest.mark.parametrize("level", [0, 2])
    def test_vertices_on_unit_sphere(self, level):
        mesh = build_icosphere(level)
        assert_allclose(np.linalg.norm(mesh.vertices, axis=1), 1.0, atol=1e-14)

    @pytest.mark.parametrize("level", [0, 1, 2])
    def test_normals_unit_and_outward(self, level):
        mesh = build_icosphere(level)
        assert_allclose(np.linalg.norm(mesh.normals, axis=1), 1.0, atol=1e-12)
        assert np.all(np.einsum("ij,ij->i", mesh.normals, mesh.centroids) > 0.0)

    def test_total_area_level4(self):
        mesh = build_icosphere(4)
        assert abs(mesh.areas.sum() - 4.0 * math.pi) / (4.0 * math.pi) < 5e-3

    def test_h_max_decreases(self):
        h = [build_icosphere(level).h_max for level in range(5)]
        assert all(a > b for a, b in zip(h, h[1:]))
        assert h[4] < 0.1

    def test_refinement_level_for_h(self):
        assert refinement_level_for_h(2.0) == 0
        assert refinement_level_for_h(0.25) == 3
        assert build_icosphere(refinement_level_for_h(0.5)).h_max <= 0.5

    def test_guards(self):
        with pytest.raises(ContractViolationError):
            build_icosphere(-1)
        with pytest.raises(CapacityError):
            build_icosphere(8)
        with pytest.raises(ContractViolationError):
            refinement_level_for_h(0.0)
        with pytest.raises(CapacityError):
            refinement_level_for_h(1e-4, max_level=3)

    def test_arrays_read_only(self):
        mesh = build_icosphere(1)
        with pytest.raises(ValueError):
            mesh.vertices[0, 0] = 2.0


class TestMesh:
    def test_reference_triangle(self):
        mesh = Mesh.from_arrays(REFERENCE_VERTICES, [[0, 1, 2]], require_closed=False)
        assert_allclose(mesh.areas, [0.5])
        assert_allclose(mesh.normals, [[0.0, 0.0, 1.0]])
        assert_allclose(mesh.diameters, [math.sqrt(2.0)])
        assert_allclose(mesh.centroids, [[1.0 / 3.0, 1.0 / 3.0, 0.0]])

    def test_closed_tetrahedron(self):
        vertices, triangles = _tetrahedron()
        mesh = Mesh.from_arrays(vertices, triangles)
        assert mesh.n_triangles == 4
        outward = np.einsum("ij,ij->i", mesh.normals, mesh.centroids - vertices.mean(axis=0))
        assert np.all(outward > 0.0)

    def test_open_mesh_rejected(self):
        with pytest.raises(MeshError, match="not closed"):
            Mesh.from_arrays(REFERENCE_VERTICES, [[0, 1, 2]])

    def test_inconsistent_orientation_rejected(self):
        vertices, triangles = _tetrahedron()
        triangles[0] = triangles[0][[0, 2, 1]]
        with pytest.raises(MeshError):
            Mesh.from_arrays(vertices, triangles)

    def test_degenerate_triangle_rejected(self):
        vertices = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
        with pytest.raises(MeshError, match="non-positive area"):
            Mesh.from_arrays(vertices, [[0, 1, 2]], require_closed=False)

    def test_index_out_of_range(self):
        with pytest.raises(MeshError, match="out of range"):
            Mesh.from_arrays(REFERENCE_VERTICES, [[0, 1, 3]], require_closed=False)

    def test_bad_shapes(self):
        with pytest.raises(MeshError):
            Mesh.from_arrays(np.zeros((3, 2)), [[0, 1, 2]], require_closed=False)
        with pytest.raises(MeshError):
            Mesh.from_arrays(REFERENCE_VERTICES, np.zeros((0, 3), dtype=int), require_closed=False)

    def test_mesh_stats(self):
        mesh = build_icosphere(1)
        stats = mesh_stats(mesh)
        assert stats.n_triangles == 80
        assert stats.n_vertices == 42
        assert stats.h_max == mesh.h_max
        assert_allclose(stats.total_area, mesh.areas.sum())
        assert 0.0 < stats.min_area <= stats.total_area / 80

    def test_vertex_normals_exact_on_sphere(self):
        mesh = build_icosphere(1)
        assert_allclose(mesh.vertex_normals, mesh.vertices, atol=1e-14)

    def test_vertex_normals_area_weighted(self):
        vertices, triangles = _tetrahedron()
        mesh = Mesh.from_arrays(vertices, triangles)
        assert_allclose(np.linalg.norm(mesh.vertex_normals, axis=1), 1.0)
        # vertex 3 = (0, 0, 1) touches the two axis-aligned faces and the slanted one
        assert mesh.vertex_normals[3, 2] > 0.0


class TestPairClassification:
    def test_tags(self):
        mesh = build_icosphere(1)
        assert classify_pair(mesh, 5, 5).tag == PairTag.COINCIDENT
        rows, cols, counts = mesh.touching_pairs()
        for i, j, count in zip(rows[:40], cols[:40], counts[:40]):
            pair = classify_pair(mesh, int(i), int(j))
            assert len(pair.shared_vertices) == count
            for local_i, local_j in pair.shared_vertices:
                assert mesh.triangles[i][local_i] == mesh.triangles[j][local_j]

    def test_disjoint(self):
        mesh = build_icosphere(1)
        centroid_distance = np.linalg.norm(mesh.centroids - mesh.centroids[0], axis=1)
        far = int(np.argmax(centroid_distance))
        assert classify_pair(mesh, 0, far).tag == PairTag.DISJOINT
        assert classify_pair(mesh, 0, far).shared_vertices == ()

    @pytest.mark.parametrize("level", [0, 1, 2])
    def test_touching_pair_counts(self, level):
        mesh = build_icosphere(level)
        rows, cols, counts = mesh.touching_pairs()
        assert np.sum(counts == 3) == mesh.n_triangles
        assert np.sum(counts == 2) == 3 * mesh.n_triangles
        assert_array_equal(rows[counts == 3], cols[counts == 3])
        assert np.all(np.diff(rows) >= 0)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            classify_pair(build_icosphere(0), 0, 20)


class TestMeshIO:
    def test_write_then_read(self, tmp_path):
        mesh = build_icosphere(1)
        path = tmp_path / "sphere.txt"
        write_mesh(mesh, path)
        loaded = read_mesh(path, sphere_radius=1.0)
        assert_array_equal(loaded.vertices, mesh.vertices)
        assert_array_equal(loaded.triangles, mesh.triangles)
        assert loaded.h_max == mesh.h_max

    def test_header_line(self, tmp_path):
        path = tmp_path / "sphere.txt"
        write_mesh(build_icosphere(0), path)
        assert path.read_text().splitlines()[0] == "12 20"

    def test_missing_file(self, tmp_path):
        with pytest.raises(MeshError, match="cannot read"):
            read_mesh(tmp_path / "missing.txt")

    def test_wrong_line_count(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 1\n0 0 0\n1 0 0\n")
        with pytest.raises(MeshError, match="expected 3 vertex"):
            read_mesh(path)

    def test_bad_vertex_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 1\n0 0 0\n1 x 0\n0 1 0\n0 1 2\n")
        with pytest.raises(MeshError, match=":3:"):
            read_mesh(path)

    def test_open_surface_in_file(self, tmp_path):
        path = tmp_path / "open.txt"
        path.write_text("3 1\n0 0 0\n1 0 0\n0 1 0\n0 1 2\n")
        with pytest.raises(MeshError, match="not closed"):
            read_mesh(path)
