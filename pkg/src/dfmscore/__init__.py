"""Context-aware DFM rule checking and scoring toolkit.

Checks metal-via enclosure rules on 2-D layouts, extracts 8-region context
metrics around each violation, trains a small feedforward network on
hotspot-labeled violations, and combines the network's hotspot probability
with the conventional rule score into context-aware scores and bins.
"""

__version__ = "0.1.0"

from .geometry import (GeometryError, Layout, LayoutParseError, Point, Polygon,
                       Rect, parse_layout, query_window, write_layout)
