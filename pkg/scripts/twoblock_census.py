"""Scan all 2^15 subsets of PG(3, 2) and bucket the tangential 2-blocks."""

import json
import time

from desconf.twoblock import classify_two_blocks


def main() -> None:
    t0 = time.perf_counter()
    doc = classify_two_blocks().to_json()
    doc["seconds"] = round(time.perf_counter() - t0, 3)
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
