"""
ifsweep helper package.

Exact and numerical analysis of one-parameter families of self-similar
iterated function systems on the line.
"""
