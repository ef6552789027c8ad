"""HTTP service wrapping the core package.

Loading a reference index is the expensive step of a scan; the service
keeps one resident and serves any number of scan, compare, and
clone-metrics requests against it.
"""

from clonesca.service.app import create_app

__all__ = ["create_app"]
