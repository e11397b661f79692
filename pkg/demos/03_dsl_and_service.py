"""Query language and HTTP facade: parse a composed expression, round-trip
it through the formatter and the JSON tree form, then evaluate it through
the service dispatcher exactly as the browser UI does.

Run from the repository root:  python demos/03_dsl_and_service.py
"""

import json
from pathlib import Path

from mdolap import dsl, ingest, service

DATA = Path(__file__).resolve().parent.parent / "data" / "louevoyage"


def main() -> None:
    c, diagnostics = dsl.parse_schema((DATA / "schema.mdschema").read_text(encoding="utf-8"))
    assert c is not None, diagnostics
    c, _ = ingest.build_from_directory(c, DATA)

    text = (
        "DrillDown(HRotate(DRotate(Display(VENTES, AGENCES, TEMPS, geo_fr, h_an), "
        "AGENCES, VOYAGES, cla_int, true), VOYAGES, cla_int, cla_fr), VOYAGES, Id)"
    )
    expr, diags = dsl.parse_query(text)
    assert expr is not None, diags
    print("parsed:   ", text)
    print("formatted:", dsl.format_query(expr))
    tree = dsl.query_to_json(expr)
    print("as JSON:  ", json.dumps(tree))
    assert dsl.query_from_json(tree) == expr

    api = service.Api(c)
    status, body = api.handle("GET", "/schema", b"")
    schema = json.loads(body)
    print(f"\nGET /schema -> {status}: {len(schema['dimensions'])} dimensions, "
          f"{len(schema['constraints'])} constraints, consistent={schema['consistent']}")

    status, body = api.handle("POST", "/query", json.dumps({"query": tree}).encode())
    doc = json.loads(body)
    print(f"POST /query -> {status}: {len(doc['cells'])} cells, footers={doc['footers']}")
    for cell in doc["cells"][:4]:
        print("   ", cell["rowPath"], cell["colPath"], cell["measures"]["montant"]["display"])

    bad = {"expr": "Display(VENTES, AGENCES, TEMPS geo_fr, h_an)"}
    status, body = api.handle("POST", "/query", json.dumps(bad).encode())
    diag = json.loads(body)["diagnostics"][0]
    print(f"\na malformed expression answers {status} with a position: "
          f"line {diag['line']}, column {diag['column']}: {diag['message']}")


if __name__ == "__main__":
    main()
