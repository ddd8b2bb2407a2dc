import json


def load_batches(path):
    with open(path) as f:
        return json.load(f)
