"""Rational Painleve-III solutions: exact Umemura oracle and large-n asymptotics."""
