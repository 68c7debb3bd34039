from django.apps import AppConfig


class InequalitiesConfig(AppConfig):
    name = 'inequalities'
    verbose_name = 'Неравенства CKN: численная лаборатория'
