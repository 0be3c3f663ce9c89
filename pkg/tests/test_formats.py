import io

import pytest

from contrascale.context import FormalContext, make_contranominal
from contrascale.datasets import medical_diagnosis
from contrascale.formats import (
    ContextParseError,
    dumps_csv,
    dumps_cxt,
    infer_format,
    load_context,
    loads_csv,
    loads_cxt,
    save_context,
)
from conftest import random_context


MINIMAL_CXT = "B\n\n1\n1\n\nobj\nattr\nX\n"


class TestCxt:
    def test_single_cell_context(self):
        ctx = loads_cxt(MINIMAL_CXT)
        assert ctx.objects == ("obj",)
        assert ctx.attributes == ("attr",)
        assert ctx.incident(0, 0)

    def test_round_trip_is_bit_exact(self, seeded):
        rng = seeded(201)
        for _ in range(20):
            ctx = random_context(rng)
            text = dumps_cxt(ctx)
            assert loads_cxt(text) == ctx
            assert dumps_cxt(loads_cxt(text)) == text

    def test_diagnosis_round_trip(self):
        ctx = medical_diagnosis()
        assert loads_cxt(dumps_cxt(ctx)) == ctx

    def test_bad_header(self):
        with pytest.raises(ContextParseError) as err:
            loads_cxt("C\n\n1\n1\n\nobj\nattr\nX\n")
        assert err.value.line == 1

    def test_bad_sizes(self):
        with pytest.raises(ContextParseError):
            loads_cxt("B\n\nx\n1\n\nobj\nattr\nX\n")

    def test_short_row(self):
        text = "B\n\n1\n2\n\nobj\na\nb\nX\n"
        with pytest.raises(ContextParseError) as err:
            loads_cxt(text)
        assert err.value.line == 9

    def test_bad_incidence_character(self):
        with pytest.raises(ContextParseError):
            loads_cxt("B\n\n1\n1\n\nobj\nattr\n?\n")

    def test_duplicate_labels(self):
        with pytest.raises(ContextParseError):
            loads_cxt("B\n\n2\n1\n\nobj\nobj\nattr\nX\n.\n")

    def test_truncated_file(self):
        with pytest.raises(ContextParseError):
            loads_cxt("B\n\n2\n1\n")


class TestCsv:
    def test_round_trip(self, seeded):
        rng = seeded(202)
        for _ in range(20):
            ctx = random_context(rng)
            assert loads_csv(dumps_csv(ctx)) == ctx

    def test_accepts_x_and_blank_cells(self):
        ctx = loads_csv(",p,q\na,x,\nb,1,0\n")
        assert ctx.incident(0, 0) and not ctx.incident(0, 1)
        assert ctx.incident(1, 0) and not ctx.incident(1, 1)

    def test_always_writes_zero_one(self):
        ctx = FormalContext(["a"], ["p", "q"], [[1, 0]])
        assert dumps_csv(ctx) == ",p,q\na,1,0\n"

    def test_short_row_reports_line(self):
        with pytest.raises(ContextParseError) as err:
            loads_csv(",p,q\na,1\n")
        assert err.value.line == 2

    def test_bad_cell(self):
        with pytest.raises(ContextParseError):
            loads_csv(",p\na,2\n")


class TestFileHandling:
    def test_save_and_load_files(self, tmp_path):
        ctx = make_contranominal(3)
        for name, fmt in (("k3.cxt", "burmeister-cxt"), ("k3.csv", "csv")):
            path = tmp_path / name
            save_context(ctx, path, fmt)
            assert load_context(path, fmt) == ctx

    def test_load_from_stream(self):
        assert load_context(io.StringIO(MINIMAL_CXT), "cxt").objects == ("obj",)

    def test_infer_format(self):
        assert infer_format("x.cxt") == "burmeister-cxt"
        assert infer_format("x.CSV") == "csv"
        with pytest.raises(ValueError):
            infer_format("x.dat")

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            load_context(io.StringIO(MINIMAL_CXT), "xml")
