import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccskg.ingest import (
    DrsError,
    Ensemble,
    SourceError,
    WarningLog,
    apply_transforms,
    parse_cf_table,
    parse_climdex,
    parse_cmip_cv,
    parse_cmor_table,
    parse_cordex_domains,
    parse_dataset_listing,
    parse_drs_id,
    parse_transform,
)
from ccskg.ingest.cleansing import CleansingError


class TestCf:
    def test_empty_table(self):
        assert parse_cf_table(b"<standard_name_table/>") == []

    def test_air_temperature(self):
        doc = b'<standard_name_table><entry id="air_temperature"><canonical_units>K</canonical_units>' \
              b"<description>Bulk air temperature.</description></entry></standard_name_table>"
        (rec,) = parse_cf_table(doc)
        assert (rec.standard_name, rec.canonical_units) == ("air_temperature", "K")

    def test_missing_id_logged(self, data_dir):
        log = WarningLog()
        records = parse_cf_table((data_dir / "sources/cf-standard-name-table.xml").read_bytes(), log)
        assert len(records) == 6
        assert log.dropped == 1 and "missing id" in str(log[0])

    def test_duplicate_logged(self):
        log = WarningLog()
        doc = b'<t><entry id="a"/><entry id="a"/></t>'
        assert len(parse_cf_table(doc, log)) == 1
        assert "duplicate" in log[0].reason

    def test_malformed_xml(self):
        with pytest.raises(SourceError):
            parse_cf_table(b"<oops")


class TestCmor:
    def test_tasmax_specializes_air_temperature(self):
        doc = json.dumps({"Header": {"table_id": "Table day"}, "variable_entry": {
            "tasmax": {"standard_name": "air_temperature", "cell_methods": "time: maximum"}}}).encode()
        (rec,) = parse_cmor_table(doc, {"air_temperature"})
        assert rec.short_name == "tasmax" and rec.cf_standard_name == "air_temperature"
        assert rec.time_aggregation == "maximum" and rec.table == "day"

    def test_empty_map(self):
        assert parse_cmor_table(b'{"variable_entry": {}}') == []

    def test_fixture_table(self, data_dir):
        cf = {r.standard_name for r in parse_cf_table((data_dir / "sources/cf-standard-name-table.xml").read_bytes())}
        log = WarningLog()
        records = parse_cmor_table((data_dir / "sources/CMIP5_Amon.json").read_bytes(), cf, log)
        assert len(records) == 6
        assert [r.short_name for r in records if r.unresolved] == ["clt"]
        assert records[-1].cf_standard_name is None
        assert len(log) == 1 and log.dropped == 0

    def test_missing_standard_name_is_not_fatal(self):
        log = WarningLog()
        (rec,) = parse_cmor_table(b'{"variable_entry": {"x": {}}}', None, log)
        assert rec.unresolved and len(log) == 1

    def test_malformed_json(self):
        with pytest.raises(SourceError):
            parse_cmor_table(b"[1, 2")


class TestDrs:
    def test_short_form(self):
        d = parse_drs_id("cmip5.HadCM3.rcp45.r10i1p1")
        assert (d.project, d.model, d.experiment, d.ensemble) == ("cmip5", "HadCM3", "rcp45", Ensemble(10, 1, 1))
        assert not d.is_long_form

    def test_bad_ensemble(self):
        with pytest.raises(DrsError, match="r<N>i<N>p<N>"):
            parse_drs_id("cmip5.HadCM3.rcp45.r0x")

    def test_long_form_cmip5(self):
        d = parse_drs_id("cmip5.output1.MOHC.HadCM3.rcp45.mon.atmos.Amon.r10i1p1")
        assert (d.product, d.institute, d.model, d.experiment) == ("output1", "MOHC", "HadCM3", "rcp45")
        assert (d.frequency, d.realm, d.table, d.ensemble) == ("mon", "atmos", "Amon", Ensemble(10, 1, 1))
        assert d.version is None

    def test_long_form_with_version(self):
        d = parse_drs_id("cmip5.output1.MOHC.HadCM3.rcp45.mon.atmos.Amon.r10i1p1.v20110905")
        assert d.version == "v20110905"

    def test_cordex_long_form(self):
        d = parse_drs_id("cordex.output.EUR-11.SMHI.MOHC-HadGEM2-ES.rcp45.r1i1p1.RCA4.v1.mon.tas")
        assert (d.domain, d.driving_model, d.model, d.variable) == ("EUR-11", "MOHC-HadGEM2-ES", "RCA4", "tas")

    @pytest.mark.parametrize("bad", ["cmip5.a.b", "cmip6.A.b.r1i1p1", "cmip5..rcp45.r1i1p1", "cmip5.A.b.r1i0p1"])
    def test_rejects(self, bad):
        with pytest.raises(DrsError):
            parse_drs_id(bad)

    def test_project_mismatch(self):
        with pytest.raises(DrsError):
            parse_drs_id("cmip5.HadCM3.rcp45.r1i1p1", "cordex")

    @given(st.lists(st.from_regex(r"[A-Za-z][A-Za-z0-9\-]{0,6}", fullmatch=True), min_size=2, max_size=2, unique=True),
           st.integers(1, 20), st.integers(1, 20))
    def test_injective(self, names, r, i):
        ids = {f"cmip5.{n}.rcp45.r{r}i{i}p1" for n in names}
        assert len({parse_drs_id(x) for x in ids}) == len(ids)

    def test_listing_rejects_short_form_and_derives_time(self, data_dir):
        log = WarningLog()
        records = parse_dataset_listing((data_dir / "sources/cmip5-datasets.csv").read_bytes(), "cmip5", log)
        assert len(records) == 4
        assert log.dropped == 1
        mon = records[0]
        assert mon.variables == ("tas", "tasmax", "pr") and mon.temporal_resolution == "P1M"


class TestCv:
    def test_empty(self):
        assert parse_cmip_cv(b"{}") == ([], [])

    def test_two_and_two(self):
        doc = {"institution_id": {"A": "Inst A", "B": "Inst B"},
               "source_id": {"M1": {"institution_id": ["A"]}, "M2": {"institution_id": ["B"]}}}
        inst, models = parse_cmip_cv(json.dumps(doc).encode())
        assert len(inst) + len(models) == 4
        assert models[0].institution_id == "A"

    def test_dangling_institution(self):
        log = WarningLog()
        doc = {"CV": {"institution_id": {"A": "x"}, "source_id": {"M": {"institution_id": ["Z"]}}}}
        _, models = parse_cmip_cv(json.dumps(doc).encode(), log)
        assert len(models) == 1 and models[0].institution_ids == ()
        assert len(log) == 1


class TestTabular:
    def test_domains_empty(self):
        assert parse_cordex_domains(b"name,region,resolution\n") == []

    def test_domains_fixture(self, data_dir):
        log = WarningLog()
        rows = parse_cordex_domains((data_dir / "sources/cordex-domains.csv").read_bytes(), log)
        names = {r.name: r for r in rows}
        assert "ARC-44" not in names and log.dropped == 1
        assert names["EUR-11"].rotated_pole and not names["EUR-11i"].rotated_pole
        assert names["EUR-11"].region_code == "EUR" and names["EUR-11"].resolution == 0.11

    def test_semicolon_delimiter(self):
        (row,) = parse_cordex_domains(b"name;region;resolution\nAFR-44;Africa;0.44\n")
        assert row.region == "Africa"

    def test_missing_column(self):
        with pytest.raises(SourceError):
            parse_cordex_domains(b"name,region\nA,B\n")

    def test_climdex_three(self):
        doc = b"index,definition,variable\nTXx,max tmax,tasmax\nTNn,min tmin,tasmin\nRx1day,max pr,pr\n"
        rows = parse_climdex(doc, {"tasmax", "tasmin", "pr"})
        assert [(r.index_id, r.source_variable) for r in rows] == [("TXx", "tasmax"), ("TNn", "tasmin"), ("Rx1day", "pr")]

    def test_climdex_unknown_variable(self):
        log = WarningLog()
        assert parse_climdex(b"index,definition,variable\nX,d,nope\n", {"tas"}, log) == []
        assert log.dropped == 1


class TestCleansing:
    def test_skip_and_rename_logged(self):
        recs = parse_cf_table(b'<t><entry id="a"/><entry id="b"/></t>')
        log = WarningLog()
        out = apply_transforms(recs, [parse_transform("skip standard_name=a"),
                                      parse_transform("rename standard_name b c")], "cf", log)
        assert [r.standard_name for r in out] == ["c"]
        assert len(log) == 2

    def test_bad_transform(self):
        with pytest.raises(CleansingError):
            parse_transform("explode everything")

    def test_reaches_drs_fields(self):
        recs = parse_dataset_listing(
            b"dataset_id,variables\ncmip5.output1.MOHC.HadCM3.rcp45.mon.atmos.Amon.r1i1p1,tas\n", "cmip5")
        out = apply_transforms(recs, [parse_transform("rename model HadCM3 HadCM3-x")], "ds", WarningLog())
        assert out[0].drs.model == "HadCM3-x"
