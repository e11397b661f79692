"""Walk through the LOUEVOYAGE schema: hierarchies with membership
conditions, and the ten-way constraint checker with witnesses.

Run from the repository root:  python demos/01_schema_and_constraints.py
"""

from dataclasses import replace
from pathlib import Path

from mdolap import constraints as cons, dsl, ingest, model

DATA = Path(__file__).resolve().parent.parent / "data" / "louevoyage"


def main() -> None:
    text = (DATA / "schema.mdschema").read_text(encoding="utf-8")
    constellation, diagnostics = dsl.parse_schema(text)
    assert constellation is not None, diagnostics

    print(f"constellation {constellation.name}:")
    for dim in constellation.dimensions.values():
        hs = ", ".join(dim.hierarchies)
        print(f"  dimension {dim.name:<8} hierarchies: {hs}")
    for fact in constellation.facts.values():
        ms = ", ".join(f"{m.name} {m.agg}" for m in fact.measures)
        print(f"  fact {fact.name:<8} measures: {ms}  over {', '.join(fact.dims)}")

    report = model.validate_schema(constellation)
    print(f"\nschema validation: {'clean' if report.ok else 'INVALID'}")

    constellation, _ = ingest.build_from_directory(constellation, DATA)

    agences = constellation.dimensions["AGENCES"]
    print("\nhierarchy membership is condition-driven:")
    for name in agences.hierarchies:
        members = sorted(model.hierarchy_members(agences, name), key=int)
        cond = model.condition_text(agences.hierarchies[name].cond)
        print(f"  {name:<7} WHEN {cond:<24} -> instances {members}")

    print("\ndeclared constraints:")
    for result in cons.check_all(constellation):
        print(f"  {result.constraint.describe():<55} {'holds' if result.holds else 'VIOLATED'}")

    # Break the geography partition on purpose: give the New York agency a
    # French country while keeping its state, so both memberships hold.
    ny = dict(agences.instances["3"].values)
    ny["Pays"] = "France"
    moved = replace(agences, instances={**agences.instances, "3": model.make_instance(agences, "3", ny)})
    broken = replace(constellation, dimensions={**constellation.dimensions, "AGENCES": moved}, consistent=None)
    result = cons.check_intra(broken, cons.intra("PARTITION", "AGENCES", "geo_fr", "geo_us"))
    print("\nafter moving agency 3 to Pays='France' (Etat kept):")
    print(f"  {result.constraint.describe()} holds={result.holds} witnesses={list(result.witnesses)}")


if __name__ == "__main__":
    main()
