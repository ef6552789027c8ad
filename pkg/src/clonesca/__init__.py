"""Clone-based software composition analysis for Java source trees.

Detects third-party library reuse introduced by copy-and-paste at class
granularity: every class is fingerprinted as the order-insensitive hash
of its normalized, call-inlined AST, a reference corpus of library
releases is refined into a deduplicated feature index, and target
projects are matched against that index.
"""

__version__ = "0.1.0"
