"""Validate CLI and HTTP output against the JSON schemas in schemas/."""
import json
import pathlib
import socket
import subprocess
import sys
import tempfile
import time
import urllib.request

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for path in schema_dir.glob("*.schema.json"):
        schemas[path.name] = json.loads(path.read_text())
    registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())
    return schemas, registry


def validate(doc, name, schemas, registry):
    jsonschema.Draft202012Validator(schemas[name], registry=registry).validate(doc)


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def fetch(url, body=None):
    data = None if body is None else json.dumps(body).encode()
    with urllib.request.urlopen(urllib.request.Request(url, data=data), timeout=10) as resp:
        return json.loads(resp.read())


def main():
    cli, fixture, schema_dir = sys.argv[1], sys.argv[2], pathlib.Path(sys.argv[3])
    schemas, registry = load_registry(schema_dir)

    with tempfile.TemporaryDirectory() as out:
        subprocess.run([cli, "audit", "-i", fixture, "-o", out], check=True, capture_output=True)
        audits = list(pathlib.Path(out).glob("audit_*.json"))
        assert audits, "no audit written"
        for path in audits:
            validate(json.loads(path.read_text()), "match_audit.schema.json", schemas, registry)

    port = free_port()
    server = subprocess.Popen([cli, "serve", "-i", fixture, "--listen", f"127.0.0.1:{port}"],
                              stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    try:
        base = f"http://127.0.0.1:{port}"
        for _ in range(100):
            try:
                fetch(base + "/health")
                break
            except OSError:
                time.sleep(0.05)
        match = fetch(base + "/matches")[0]["match_id"]
        timeline = fetch(f"{base}/matches/{match}/timeline")
        validate(timeline, "timeline.schema.json", schemas, registry)
        entry = timeline["slices"][0]["entries"][0]
        result = fetch(f"{base}/matches/{match}/whatif",
                       {"slice": timeline["slices"][0]["slice"], "player": entry["player_id"],
                        "overrides": {"momentum_rate": -0.5}})
        validate(result, "priority_result.schema.json", schemas, registry)
        assert result["overridden"] == ["momentum_rate"], result["overridden"]
    finally:
        server.terminate()
        server.wait(timeout=10)
    print("schemas ok")


if __name__ == "__main__":
    main()
