# coding: utf-8

# # Rate-1/2 parameter table
#
# RS codes of length 16 and Hermitian codes of length 64 over GF(16), all
# parties contacted. Ratios use exact fractions and half-up rounding.

from staircase.analysis import parameter_table, round2, table_csv

rows = parameter_table(16)
print(table_csv(rows))

# The Hermitian column starts higher because r carries an extra 2g.

for row in rows:
    if row.t == 0:
        print(row.family, "t=0: r/n", round2(row.r_over_n), "DB/n", round2(row.db_over_n))
