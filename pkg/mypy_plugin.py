from mypy.plugin import Plugin, ClassDefContext
from mypy.plugins import attrs


def dataclass_maker_callback(ctx: ClassDefContext):
    return attrs.attr_class_maker_callback(ctx, auto_attribs_default=True)


class CustomPlugin(Plugin):
    def get_class_decorator_hook(self, fullname: str):
        if fullname == "securesum.domain.dataclass.dataclass":
            # Classes decorated with `@dataclass` are `attr.s` classes.
            return dataclass_maker_callback
        return None


def plugin(version: str):
    return CustomPlugin
