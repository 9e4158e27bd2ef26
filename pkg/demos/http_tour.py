"""Serve the sample graph on a random port and hit a few endpoints.

    python demos/http_tour.py
"""

import json
import urllib.request

from teachkg import build_kg, load_corpus, sample_corpus_path
from teachkg.pkg import build_all_pkgs
from teachkg.server import Snapshot, serve_in_thread

PATHS = [
    "/topics/tkg:sparql/prerequisites",
    "/courses/tkg:semweb-bachelor/similar?k=2",
    "/materials/tkg:kgm-03-notes/access?requester=a-student",
]


def main():
    kg = build_kg(load_corpus(sample_corpus_path()))
    server, thread = serve_in_thread(Snapshot.of(kg, build_all_pkgs(kg.store)))
    base = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        for path in PATHS:
            with urllib.request.urlopen(base + path) as resp:
                print("GET", path)
                print(json.dumps(json.load(resp), indent=2)[:600], "\n")
    finally:
        server.shutdown()
        server.server_close()


if __name__ == "__main__":
    main()
