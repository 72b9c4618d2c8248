"""
Dense numerical core of QSR Lab: linear algebra, states and entropies.
"""
