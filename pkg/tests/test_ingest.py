"""CSV loading, rejection reporting, snapshot round-trips and the store's
atomic swap behavior."""

import io
import json
from fractions import Fraction

import pytest

from mdolap import ingest, model
from mdolap.errors import (
    MissingIdColumn,
    MissingLinkColumn,
    SnapshotError,
    UnknownColumn,
    UnknownDimension,
)

AGENCES_HEADER = "Id,Raison,Ville,Departement,Nom_dpt,Region,Pays,Etat,Zone,Enseigne"


class TestDimensionLoading:
    def test_classic_three_rows(self, trio):
        dim = trio.dimensions["AGENCES"]
        assert set(dim.instances) == {"1", "2", "3"}
        ny = dim.instances["3"]
        assert ny.values["Departement"] is None
        assert ny.values["Etat"] == "New York"
        assert ny.values["All"] == "all"
        assert dim.instances["1"].values["Departement"] == 31

    def test_header_only_file_loads_nothing(self, seed_skeleton):
        c, report = ingest.load_dimension_csv(
            seed_skeleton, "AGENCES", io.StringIO(AGENCES_HEADER + "\n")
        )
        assert report.rows_read == 0 and report.rows_loaded == 0
        assert c.dimensions["AGENCES"].instances == {}

    def test_duplicate_id_rejected_with_reason(self, seed_skeleton):
        rows = f"{AGENCES_HEADER}\n1,A,V,,,,France,,Z,E\n1,B,W,,,,France,,Z,E\n"
        c, report = ingest.load_dimension_csv(seed_skeleton, "AGENCES", io.StringIO(rows))
        assert report.rows_read == 2
        assert report.rows_loaded == 1
        assert report.rejected == [(3, "duplicate id '1'")]
        assert report.rows_read == report.rows_loaded + report.rows_rejected

    def test_missing_columns_become_null(self, seed_skeleton):
        rows = "Id,Pays\n1,France\n"
        c, _ = ingest.load_dimension_csv(seed_skeleton, "AGENCES", io.StringIO(rows))
        inst = c.dimensions["AGENCES"].instances["1"]
        assert inst.values["Pays"] == "France"
        assert inst.values["Raison"] is None

    def test_bad_int_rejected(self, seed_skeleton):
        rows = "Id,mois,annee\n1,March,2000\n2,3,2000\n"
        c, report = ingest.load_dimension_csv(seed_skeleton, "TEMPS", io.StringIO(rows))
        assert report.rows_loaded == 1
        assert "not an integer" in report.rejected[0][1]

    def test_missing_id_column(self, seed_skeleton):
        with pytest.raises(MissingIdColumn):
            ingest.load_dimension_csv(seed_skeleton, "AGENCES", io.StringIO("Pays\nFrance\n"))

    def test_all_column_forbidden(self, seed_skeleton):
        with pytest.raises(UnknownColumn):
            ingest.load_dimension_csv(seed_skeleton, "AGENCES", io.StringIO("Id,All\n1,all\n"))

    def test_unknown_dimension(self, seed_skeleton):
        with pytest.raises(UnknownDimension):
            ingest.load_dimension_csv(seed_skeleton, "NOWHERE", io.StringIO("Id\n1\n"))

    def test_ids_canonicalize(self, seed_skeleton):
        rows = "Id,Pays\n007,France\n"
        c, _ = ingest.load_dimension_csv(seed_skeleton, "AGENCES", io.StringIO(rows))
        assert "7" in c.dimensions["AGENCES"].instances


class TestFactLoading:
    def fixture_with_dims(self, seed_skeleton):
        c = seed_skeleton
        c, _ = ingest.load_dimension_csv(c, "TEMPS", io.StringIO("Id,mois,annee\n1,3,2000\n"))
        c, _ = ingest.load_dimension_csv(
            c, "AGENCES", io.StringIO(f"{AGENCES_HEADER}\n1,A,Toulouse,31,HG,MP,France,,S-FR,Fram\n")
        )
        c, _ = ingest.load_dimension_csv(
            c,
            "VOYAGES",
            io.StringIO("Id,Ville,Pays,Continent,TypeV,Class,Categorie\n1,Rome,Italie,Europe,,,Circuit\n"),
        )
        c, _ = ingest.load_dimension_csv(
            c, "CLIENTS", io.StringIO("Id,Nom,Categorie\n1,Dupont,P\n2,Martin,P\n")
        )
        return c

    def test_two_classic_sales(self, seed_skeleton):
        c = self.fixture_with_dims(seed_skeleton)
        rows = (
            "montant,nbpers,TEMPS_id,VOYAGES_id,AGENCES_id,CLIENTS_id\n"
            "540.00,2,1,1,1,1\n"
            "1080.00,4,1,1,1,2\n"
        )
        c, report = ingest.load_fact_csv(c, "VENTES", io.StringIO(rows))
        assert report.rows_loaded == 2
        sales = c.facts["VENTES"].instances
        assert sales[0].measures == {"montant": Fraction(540), "nbpers": 2}
        assert sales[1].measures == {"montant": Fraction(1080), "nbpers": 4}
        assert sales[0].links == {"TEMPS": "1", "VOYAGES": "1", "AGENCES": "1", "CLIENTS": "1"}
        assert sales[1].links["CLIENTS"] == "2"

    def test_dangling_link_rejected(self, seed_skeleton):
        c = self.fixture_with_dims(seed_skeleton)
        rows = (
            "montant,nbpers,TEMPS_id,VOYAGES_id,AGENCES_id,CLIENTS_id\n"
            "10.00,1,1,1,99,1\n"
        )
        c, report = ingest.load_fact_csv(c, "VENTES", io.StringIO(rows))
        assert report.rows_loaded == 0
        assert report.rejected == [(2, "dangling link: no 'AGENCES' instance '99'")]

    def test_missing_measure_value_rejected(self, seed_skeleton):
        c = self.fixture_with_dims(seed_skeleton)
        rows = "montant,nbpers,TEMPS_id,VOYAGES_id,AGENCES_id,CLIENTS_id\n,2,1,1,1,1\n"
        c, report = ingest.load_fact_csv(c, "VENTES", io.StringIO(rows))
        assert report.rows_loaded == 0
        assert "montant" in report.rejected[0][1]

    def test_missing_link_column(self, seed_skeleton):
        c = self.fixture_with_dims(seed_skeleton)
        rows = "montant,nbpers,TEMPS_id,VOYAGES_id,AGENCES_id\n1.00,1,1,1,1\n"
        with pytest.raises(MissingLinkColumn):
            ingest.load_fact_csv(c, "VENTES", io.StringIO(rows))

    def test_load_records_consistency(self, seed):
        # The fully loaded sample store satisfies its constraints.
        assert seed.consistent is True

    def test_failed_load_leaves_previous_snapshot_untouched(self, seed_skeleton):
        store = ingest.Store(self.fixture_with_dims(seed_skeleton))
        before = store.snapshot
        with pytest.raises(MissingLinkColumn):
            store.load_fact_csv("VENTES", io.StringIO("montant,nbpers\n1.00,1\n"))
        assert store.snapshot is before
        report = store.load_fact_csv(
            "VENTES",
            io.StringIO(
                "montant,nbpers,TEMPS_id,VOYAGES_id,AGENCES_id,CLIENTS_id\n540.00,2,1,1,1,1\n"
            ),
        )
        assert report.rows_loaded == 1
        assert store.snapshot is not before
        assert before.facts["VENTES"].instances == []  # old snapshot unchanged


class TestSnapshots:
    def test_round_trip_is_identity_and_resave_is_byte_identical(self, seed, tmp_path):
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        ingest.snapshot_save(seed, first)
        reloaded = ingest.snapshot_load(first)
        ingest.snapshot_save(reloaded, second)
        assert first.read_bytes() == second.read_bytes()
        assert reloaded.name == seed.name
        assert set(reloaded.dimensions) == set(seed.dimensions)
        assert reloaded.constraints == seed.constraints
        assert reloaded.consistent is True
        for name, dim in seed.dimensions.items():
            assert reloaded.dimensions[name].instances == dim.instances
        for name, fact in seed.facts.items():
            assert reloaded.facts[name].instances == fact.instances

    def test_round_trip_of_empty_constellation(self, tmp_path):
        c = model.Constellation(name="EMPTY")
        path = tmp_path / "empty.json"
        ingest.snapshot_save(c, path)
        again = ingest.snapshot_load(path)
        assert again.name == "EMPTY"
        assert again.dimensions == {} and again.facts == {}

    def test_truncated_file_fails_cleanly(self, seed, tmp_path):
        path = tmp_path / "broken.json"
        ingest.snapshot_save(seed, path)
        path.write_bytes(path.read_bytes()[: 200])
        with pytest.raises(SnapshotError):
            ingest.snapshot_load(path)

    def test_wrong_format_marker(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"format": "something-else"}))
        with pytest.raises(SnapshotError):
            ingest.snapshot_load(path)

    def test_decimal_values_survive_exactly(self, seed, tmp_path):
        path = tmp_path / "exact.json"
        ingest.snapshot_save(seed, path)
        again = ingest.snapshot_load(path)
        montants = [i.measures["montant"] for i in again.facts["VENTES"].instances]
        assert all(isinstance(m, Fraction) for m in montants)
        # 500+800+1200 French plus 700+850+1100 stateside
        assert sum(montants) == Fraction(5150)


class TestDirectoryLoading:
    def test_sample_directory(self, seed_skeleton):
        from conftest import DATA_DIR

        c, reports = ingest.build_from_directory(seed_skeleton, DATA_DIR)
        assert reports["VENTES"].rows_loaded == 34
        assert reports["PERF"].rows_loaded == 4
        assert reports["VENTES"].consistent is True  # checked after every fact load
        assert reports["PERF"].consistent is True
        assert c.consistent is True
