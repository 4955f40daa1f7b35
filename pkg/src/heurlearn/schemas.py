"""Names and order of the two feature schemas."""

SIMPLE = "simple"
FF = "ff"

FEATURE_NAMES = {
    SIMPLE: (
        "num_variables",
        "q1_domain_size",
        "q2_domain_size",
        "q3_domain_size",
        "num_goal_conjuncts",
        "num_unsatisfied_goals",
    ),
    FF: (
        "ff_value",
        "num_unsatisfied_goals",
        "op_count",
        "ignored_deletes_total",
        "ignored_deletes_avg",
    ),
}


def n_features(schema):
    return len(FEATURE_NAMES[schema])
