"""Published per-entity counts used as fixtures: (entity, N_i, V_i, M_i, label).

Column order follows the printed tables (N, V, M).  ``place`` repeats
``lon``'s M_i exactly as printed.
"""

TWEETS = [
    ("latlon", 1624984, 1625197, 1506465, "Identity"),
    ("lat", 1624984, 1625192, 1504469, "Identity"),
    ("lon", 1625061, 1625725, 1504619, "Identity"),
    ("place", 1741337, 1741516, 1504619, "Identity"),
    ("retweetID", 636455, 636644, 627163, "Identity"),
    ("reuserID", 720624, 722148, 676616, "Identity"),
    ("time", 2020000, 2020000, 35176, "Organization"),
    ("userID", 2020000, 2020000, 1711141, "Identity"),
    ("user", 2020000, 2020000, 1711143, "Identity"),
    ("word", 1976746, 17180314, 7838862, "Authority"),
]

SGE = [
    ("Account", 11446187, 11446187, 1, "Vestigial"),
    ("CPU Hours", 11446187, 11446187, 2752964, "Identity"),
    ("Default Department", 11446187, 11446187, 1, "Vestigial"),
    ("Job Name", 11446187, 11446187, 90491, "Organization"),
    ("Job Number", 11446187, 11446187, 485212, "Identity"),
    ("Memory Usage", 11446187, 11446187, 5241559, "Identity"),
    ("Priority", 11446187, 11446187, 1, "Vestigial"),
    ("Task Number", 11446187, 11446187, 7491889, "Identity"),
    ("User Name", 11446187, 11446187, 8388, "Organization"),
]

POPULAR_USERS = {
    "user|SFBayRoadAlerts": 258,
    "user|akhbarhurra": 177,
    "user|attir_midzi": 159,
    "user|verkehr_bw": 300,
}

POPULAR_JOBS = {
    "job_name|rolling_pipeline.sh": 2762791,
    "job_name|run_blast.sh": 1256422,
    "job_name|run_blast_parser.sh": 1162522,
}


def stats(rows):
    from dimprofile.dda import EntityStats

    return [EntityStats(e, n, m, v) for e, n, v, m, _ in rows]
