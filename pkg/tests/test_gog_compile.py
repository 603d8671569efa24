import json

import numpy as np
import pytest

from vizbridge.datamodel import CATEGORICAL, QUANTITATIVE, Column, DataSource
from vizbridge.gog import CompileError, compile_scene, parse
from vizbridge.gog.compiler import ContourField, PointMarks, scene_to_doc

from tests.test_gog_lang import LISTING


@pytest.fixture
def toy_table():
    return DataSource(
        "countries",
        [
            Column("birth", QUANTITATIVE),
            Column("death", QUANTITATIVE),
            Column("country", CATEGORICAL),
        ],
        [
            np.array([10.0, 25.0, 30.0]),
            np.array([9.0, 12.0, 27.0]),
            ["Sweden", "Brazil", "Chad"],
        ],
    )


class TestCompileListing:
    def test_full_listing(self, toy_table):
        scene = compile_scene(parse(LISTING), toy_table)
        assert scene.data_ref == toy_table.id
        assert (scene.x_dim, scene.y_dim) == ("birth", "death")
        assert len(scene.elements) == 2
        assert len(scene.guides) == 3

        point = scene.elements[0]
        assert point.geom == "point"
        assert isinstance(point.computed, PointMarks)
        assert len(point.computed.xs) == 3
        assert point.computed.labels == ("Sweden", "Brazil", "Chad")

        contour = scene.elements[1]
        assert contour.geom == "contour"
        assert isinstance(contour.computed, ContourField)
        assert len(contour.computed.levels) == 5
        assert len(contour.computed.colors) == 5

        line, ax1, ax2 = scene.guides
        assert line.guide == "form.line"
        assert line.params == ((0.0, 0.0), (30.0, 30.0))
        assert line.label == "Zero Population Growth"
        assert (ax1.params, ax1.label) == (1, "Birth Rate")
        assert (ax2.params, ax2.label) == (2, "Death Rate")

        assert scene.x_domain == (10.0, 30.0)
        assert scene.y_domain == (9.0, 27.0)

    def test_point_marks_equal_row_count(self, toy_table):
        for n in (1, 3):
            rows = slice(0, n)
            src = DataSource(
                "t",
                toy_table.columns,
                [
                    np.asarray(toy_table.column_values(0))[rows],
                    np.asarray(toy_table.column_values(1))[rows],
                    list(toy_table.column_values(2))[rows],
                ],
            )
            scene = compile_scene(parse("ELEMENT: point(position(birth*death))"), src)
            marks = scene.elements[0].computed
            assert len(marks.xs) == n == len(marks.ys)

    def test_guide_only_scene(self, toy_table):
        scene = compile_scene(parse('GUIDE : axis(dim(1), label("X"))'), toy_table)
        assert scene.elements == ()
        assert len(scene.guides) == 1
        assert scene.x_dim is None

    def test_unknown_column(self, toy_table):
        with pytest.raises(CompileError, match="unknown column bith"):
            compile_scene(parse("ELEMENT: point(position(bith*death))"), toy_table)

    def test_categorical_position_is_type_error(self, toy_table):
        with pytest.raises(CompileError, match="categorical"):
            compile_scene(parse("ELEMENT: point(position(country*death))"), toy_table)

    def test_unknown_geom(self, toy_table):
        with pytest.raises(CompileError, match="unknown geom"):
            compile_scene(parse("ELEMENT: blob(position(birth*death))"), toy_table)

    def test_unknown_guide(self, toy_table):
        with pytest.raises(CompileError, match="unknown guide"):
            compile_scene(parse("GUIDE: legend(dim(1))"), toy_table)

    def test_missing_position(self, toy_table):
        with pytest.raises(CompileError, match="position"):
            compile_scene(parse("ELEMENT: point(size(zero))"), toy_table)

    def test_axis_dim_range(self, toy_table):
        with pytest.raises(CompileError, match="dim"):
            compile_scene(parse('GUIDE: axis(dim(3), label("X"))'), toy_table)

    def test_size_zero_uses_min_radius(self, toy_table):
        scene = compile_scene(
            parse("ELEMENT: point(position(birth*death), size(zero))"), toy_table
        )
        assert set(scene.elements[0].computed.radii) == {1.0}

    def test_polyline_geom(self, toy_table):
        scene = compile_scene(parse("ELEMENT: polyline(position(birth*death))"), toy_table)
        assert scene.elements[0].geom == "polyline"

    def test_conflicting_dims_rejected(self, toy_table):
        script = (
            "ELEMENT: point(position(birth*death))\n"
            "ELEMENT: point(position(death*birth))\n"
        )
        with pytest.raises(CompileError, match="conflicting"):
            compile_scene(parse(script), toy_table)


class TestContourDefaults:
    def test_contour_levels_between_10_and_90_percent(self, toy_table):
        scene = compile_scene(parse(LISTING), toy_table)
        field = scene.elements[1].computed
        peak = float(field.grid.max())
        assert field.levels[0] == pytest.approx(0.1 * peak)
        assert field.levels[-1] == pytest.approx(0.9 * peak)
        assert len(field.levels) == 5

    def test_contour_polylines_in_data_coords(self, toy_table):
        scene = compile_scene(parse(LISTING), toy_table)
        field = scene.elements[1].computed
        (x_lo, x_hi) = float(field.xs[0]), float(field.xs[-1])
        (y_lo, y_hi) = float(field.ys[0]), float(field.ys[-1])
        for _, polys in field.isolines:
            for poly in polys:
                for x, y in poly:
                    assert x_lo - 1e-9 <= x <= x_hi + 1e-9
                    assert y_lo - 1e-9 <= y <= y_hi + 1e-9

    def test_hue_colors_distinct_and_deterministic(self, toy_table):
        a = compile_scene(parse(LISTING), toy_table)
        b = compile_scene(parse(LISTING), toy_table)
        ca = a.elements[1].computed.colors
        cb = b.elements[1].computed.colors
        assert ca == cb
        assert len(set(ca)) == 5


def test_scene_doc_is_jsonable(toy_table):
    scene = compile_scene(parse(LISTING), toy_table)
    doc = scene_to_doc(scene)
    text = json.dumps(doc)
    back = json.loads(text)
    assert back["xDim"] == "birth"
    assert back["guides"][0]["label"] == "Zero Population Growth"
    assert len(back["elements"][0]["marks"]["x"]) == 3
    assert len(back["elements"][1]["contours"]) == 5
