import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # bruteforce / reference_tables

from mdolap import dsl, ingest

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data" / "louevoyage"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def seed_schema_text() -> str:
    return (DATA_DIR / "schema.mdschema").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def seed_skeleton(seed_schema_text):
    constellation, diagnostics = dsl.parse_schema(seed_schema_text)
    assert constellation is not None, [str(d) for d in diagnostics]
    return constellation


@pytest.fixture(scope="session")
def seed(seed_skeleton):
    constellation, reports = ingest.build_from_directory(seed_skeleton, DATA_DIR)
    for name, report in reports.items():
        assert not report.rejected, (name, report.rejected)
    return constellation


@pytest.fixture(scope="session")
def seed_snapshot_path(seed, tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("snapshot") / "louevoyage.json"
    ingest.snapshot_save(seed, path)
    return path


TRIO_CSV = """Id,Raison,Ville,Departement,Nom_dpt,Region,Pays,Etat,Zone,Enseigne
1,Agence Campus31,Toulouse,31,Hte-Garonne,Midi-Pyrénées,France,,S-FR,Fram
2,Agence du Bouchon,Lyon,69,Rhône,Rhône-Alpes,France,,E-FR,Fram
3,Big Appel Agency,New York,,,,Etats-Unis,New York,E-US,Travel Express
"""


@pytest.fixture()
def trio(seed_skeleton):
    """The three classic travel agencies: Toulouse, Lyon, New York."""
    import io

    constellation, report = ingest.load_dimension_csv(seed_skeleton, "AGENCES", io.StringIO(TRIO_CSV))
    assert report.rows_loaded == 3
    return constellation
