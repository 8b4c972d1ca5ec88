import csv
import json
import math
from io import StringIO

import numpy as np

CSV_COLUMNS = [
    "name",
    "order",
    "classes",
    "components",
    "diameter",
    "verdict",
    "witness_x",
    "witness_y",
    "millis",
]

INFINITY_LABEL = "inf"


class Serializer:
    def __init__(self, precision=None):
        self.precision = precision

    def serialize(self, obj):
        if obj is None:
            return None

        t = type(obj)

        # Basic types don't need to be converted
        if t in (int, str, bool):
            return obj

        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return self.do_float(float(obj))

        # Use one of the custom converters, if possible
        fn = getattr(self, f"do_{t.__name__}", None)
        if fn is not None:
            return fn(obj)

        # Reports and containers describe themselves
        if hasattr(obj, "to_dict"):
            return self.serialize(obj.to_dict())

        return str(obj)

    def do_float(self, x):
        if math.isinf(x):
            return INFINITY_LABEL if x > 0 else "-" + INFINITY_LABEL
        return x if self.precision is None else round(x, self.precision)

    def do_list(self, obj):
        return list(self.serialize(x) for x in obj)

    def do_tuple(self, obj):
        return list(self.serialize(x) for x in obj)

    def do_dict(self, obj):
        return {k: self.serialize(v) for k, v in obj.items()}

    def do_ndarray(self, obj):
        return self.serialize(obj.tolist())

    def do_Fraction(self, obj):
        return str(obj)

    def do_Quaternion(self, obj):
        return str(obj)


def to_json(obj, stream=None, indent=None, precision=None):
    serialized = Serializer(precision=precision).serialize(obj)

    if stream is None:
        return json.dumps(serialized, indent=indent)
    else:
        return json.dump(serialized, stream, indent=indent)


def to_csv(reports, stream=None, precision=None):
    """One row per report, in the fixed CSV_COLUMNS order."""
    if stream is None:
        stream = StringIO()
        to_string = True
    else:
        to_string = False

    serializer = Serializer(precision=precision)
    rows = [serializer.serialize(r.csv_row()) for r in reports]

    w = csv.DictWriter(
        stream, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n"
    )
    w.writeheader()
    w.writerows(rows)

    if to_string:
        stream.seek(0)
        return stream.read()
