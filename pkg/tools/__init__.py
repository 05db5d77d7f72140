"""Обратные системы Маколея: многочлены, точная линейная алгебра, базисы Грёбнера, 2-растянутые алгебры и препятствия."""
