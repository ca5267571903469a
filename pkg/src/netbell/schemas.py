"""JSON Schemas (draft 2020-12) for every serialised artefact."""

_number = {"type": "number"}
_edge = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}
_nullable_number = {"type": ["number", "null"]}

NOISY_STATE_PARAMS = {
    "type": "object",
    "properties": {
        "v": {"type": "number", "minimum": 0, "maximum": 1},
        "lambda": {"type": "number", "minimum": 0, "maximum": 1},
    },
    "required": ["v", "lambda"],
}

CHAINED_GAME_SPEC = {
    "type": "object",
    "properties": {
        "k": {"type": "integer", "minimum": 2},
        "plane": {"enum": ["XZ", "XY"]},
        "a": {"type": "array", "items": _number},
        "b": {"type": "array", "items": _number},
    },
    "required": ["k", "plane", "a", "b"],
}

NETWORK_GRAPH = {
    "type": "object",
    "properties": {
        "nodes": {"type": "integer", "minimum": 2},
        "edges": {"type": "array", "items": _edge},
    },
    "required": ["nodes", "edges"],
}

GAME_BOUNDS = {
    "type": "object",
    "properties": {"B_L": _number, "B_S": _number, "B_Q": _number, "B_N": _number},
    "required": ["B_L", "B_S", "B_Q", "B_N"],
}

BOX = {
    "type": "object",
    "properties": {
        "shape": {
            "type": "object",
            "properties": {
                "outputs_a": {"type": "integer"},
                "outputs_b": {"type": "integer"},
                "inputs_a": {"type": "integer"},
                "inputs_b": {"type": "integer"},
            },
            "required": ["outputs_a", "outputs_b", "inputs_a", "inputs_b"],
        },
        "axes": {"const": ["a", "b", "x", "y"]},
        "table": {"type": "array", "items": {"type": "number", "minimum": 0}},
    },
    "required": ["shape", "table"],
}

EXPERIMENT_CONFIG = {
    "type": "object",
    "properties": {
        "graph": {"oneOf": [{"type": "string"}, NETWORK_GRAPH]},
        "k": {"type": "integer", "minimum": 2},
        "plane": {"enum": ["XZ", "XY"]},
        "states": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"edge": _edge, **NOISY_STATE_PARAMS["properties"]},
                "required": ["edge", "v"],
            },
        },
        "angles": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"edge": _edge, **CHAINED_GAME_SPEC["properties"]},
                "required": ["edge", "k", "a", "b"],
            },
        },
        "monte_carlo": {
            "type": "object",
            "properties": {
                "events_per_input": {"type": "integer", "minimum": 0},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
    },
    "required": ["graph", "k", "states"],
}

RUN_REPORT = {
    "type": "object",
    "properties": {
        "schema_version": {"const": "1.0"},
        "mode": {"enum": ["exact", "sampled"]},
        "k": {"type": "integer"},
        "per_edge": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"edge": _edge, "score": _number, "stderr": {"type": "number", "minimum": 0}},
                "required": ["edge", "score", "stderr"],
            },
        },
        "total": _number,
        "total_error": {"type": "number", "minimum": 0},
        "bound": _number,
        "ratio": _number,
        "sigma": _nullable_number,
        "witnessing": {"type": "boolean"},
    },
    "required": ["schema_version", "mode", "per_edge", "total", "total_error", "bound", "ratio", "sigma"],
}

DECOMPOSITION_CERTIFICATE = {
    "type": "object",
    "properties": {
        "w": _number,
        "ok": {"type": "boolean"},
        "weights": {"type": "array", "items": _number},
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "weight": _number,
                    "tag": {"type": "string"},
                    "communicating_pair": _edge,
                    "local_edge": _edge,
                    "local_edge_is_local": {"type": "boolean"},
                },
                "required": ["weight", "tag", "communicating_pair", "local_edge", "local_edge_is_local"],
            },
        },
        "max_reconstruction_error": _number,
        "weight_sum": _number,
        "failures": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["w", "ok", "weights", "components", "max_reconstruction_error", "failures"],
}

ORACLE_RESULT = {
    "type": "object",
    "properties": {
        "bound": _number,
        "bound_exact": {"type": "string"},
        "excluded_vertex": {"type": "integer"},
        "strategy": {"type": "object"},
        "per_vertex": {"type": "object", "additionalProperties": _number},
        "per_edge": {"type": "object", "additionalProperties": _number},
        "local_max": _number,
    },
    "required": ["bound", "excluded_vertex", "strategy"],
}

EXPRESSION_TABLE = {
    "type": "object",
    "properties": {
        "graph": NETWORK_GRAPH,
        "k": {"type": "integer", "minimum": 2},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "edge": _edge,
                    "coefficients": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                },
                "required": ["edge", "coefficients"],
            },
        },
    },
    "required": ["graph", "k", "edges"],
}
