"""
SharkTower: точная работа с кусочно-линейными отображениями отрезка,
периодическими орбитами и порядком Шарковского.
"""
