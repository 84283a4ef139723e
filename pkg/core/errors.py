"""Exception types ที่ใช้ร่วมกันทั้ง library และ CLI"""


class MMDFError(Exception):
    """Base class: CLI จับ subclass เหล่านี้แล้ว map เป็น exit code"""


class DomainError(MMDFError, ValueError):
    """Input อยู่นอก domain ทางฟิสิกส์ (ความถี่ <= 0, มุม >= 90°, grid ว่าง)"""


class ConfigError(MMDFError, ValueError):
    """Configuration ใช้ไม่ได้: material id ไม่มีใน database, config file ผิด format ฯลฯ"""


class SingularityError(MMDFError, ArithmeticError):
    """ตัวหารของ interface reflection เป็นศูนย์"""


class EmptyArchiveError(MMDFError, ValueError):
    """เลือก knee จาก archive ที่ว่าง"""
