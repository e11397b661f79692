"""The pivot-operator tour: open a table, drill with and without the
hierarchy-membership filter, roll back up, then rotate hierarchies and
dimensions with both flag settings.

Run from the repository root:  python demos/02_pivot_walkthrough.py
"""

from pathlib import Path

from mdolap import algebra, dsl, ingest, render

DATA = Path(__file__).resolve().parent.parent / "data" / "louevoyage"


def show(title: str, c, t) -> None:
    print(f"=== {title}")
    print(render.render_table(c, t, algebra.compute_cells(c, t)))
    print()


def main() -> None:
    c, diagnostics = dsl.parse_schema((DATA / "schema.mdschema").read_text(encoding="utf-8"))
    assert c is not None, diagnostics
    c, _ = ingest.build_from_directory(c, DATA)

    base = algebra.display(c, "VENTES", "AGENCES", "TEMPS", "geo_fr", "h_an")
    show("yearly sales of the French agencies", c, base)

    drilled = algebra.drilldown(c, base, "AGENCES", "Region")
    show("drilled to regions (strict: only members of geo_fr)", c, drilled)

    show(
        "same drill in legacy mode: stateside sales surface as a NULL region",
        c,
        algebra.with_mode(drilled, algebra.LEGACY),
    )

    show("rolled back up to countries", c, algebra.rollup(c, drilled, "AGENCES", "Pays"))

    zones = algebra.hrotate(c, base, "AGENCES", "geo_fr", "geo_zn", False)
    show("hierarchy rotation to geo_zn, reinitialized: both countries", c, zones)

    maintained = algebra.hrotate(c, base, "AGENCES", "geo_fr", "geo_zn", True)
    show("same rotation with flag=true: the French universe is maintained", c, maintained)

    continents = algebra.drotate(c, base, "AGENCES", "VOYAGES", "cla_int", True)
    show(
        "dimension rotation onto VOYAGES with flag=true: the geo_fr "
        "condition becomes a footer predicate",
        c,
        continents,
    )

    empty = algebra.hrotate(c, base, "AGENCES", "geo_fr", "geo_us", True)
    show("maintained rotation into the partitioned hierarchy is provably empty", c, empty)


if __name__ == "__main__":
    main()
