"""Hard caps for the bounded exhaustive searches.

``DRTOOL_SEARCH_CAP`` overrides every cap at once; individual call sites
also accept an explicit value.
"""

import os

BI_FOREST_CAP = 25  # generators; the search is exhaustive over 2^n signs
ZERO_ONE_CAP = 24  # corners; exhaustive over 2^n angles with pruning
DIAGRAM_FACE_CAP = 8  # faces per spherical diagram in the gluing search


def search_cap(default):
    value = os.environ.get("DRTOOL_SEARCH_CAP")
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default
