"""
avoidgroup.sql

SQL code for the avoidgroup verdict store.
"""

create_verdicts_table = """
CREATE TABLE IF NOT EXISTS Verdicts (
  patterns text NOT NULL,
  n INTEGER NOT NULL,
  kind text NOT NULL,
  label text NOT NULL,
  group_order text NOT NULL,
  fingerprint json,
  source text NOT NULL,
  PRIMARY KEY(patterns, n)
);
"""

create_scan_orbits_table = """
CREATE TABLE IF NOT EXISTS ScanOrbits (
  family text NOT NULL,
  representative text NOT NULL,
  members json NOT NULL,
  status text NOT NULL,
  certificate json,
  PRIMARY KEY(family, representative)
);
"""

insert_or_replace_verdict = """
INSERT OR REPLACE INTO Verdicts(patterns, n, kind, label, group_order, fingerprint, source)
VALUES (?, ?, ?, ?, ?, ?, ?)
"""

insert_or_replace_scan_orbit = """
INSERT OR REPLACE INTO ScanOrbits(family, representative, members, status, certificate)
VALUES (?, ?, ?, ?, ?)
"""

select_verdicts = """
SELECT patterns, n, kind, label, group_order, fingerprint, source
FROM Verdicts
WHERE patterns=?
ORDER BY n
"""
