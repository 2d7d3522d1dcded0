import numpy as np
import pytest

from dfmscore.geometry import (GeometryError, Layout, LayoutParseError, Point,
                               Polygon, Rect, merge_rects, parse_layout,
                               query_window, write_layout)
from oracles import (随机 := None) if False else ...  # placeholder removed below
