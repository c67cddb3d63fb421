"""
soficlab 模块

有限 sofic 逼近实验室：在有限标号集合上构造群作用（Bernoulli、树型、profinite、轨道等价扩张），
统计 r-邻域类型的频率，并把有限型核算子实例化到有限模型上，检验迹矩收敛与 Fuglede–Kadison 行列式下界。

主要子包：
- soficlab.action: 有限作用、生成元字、限制与重着色
- soficlab.stats: 邻域类型的规范编码、频率统计与统计距离
- soficlab.build: profinite / Bernoulli / 树型构造，有理舍入与轨道等价扩张
- soficlab.operator: 块稀疏核、有限型算子规格与逼近缺陷
- soficlab.spectral: 谱分布、行列式与精确整数证书
- soficlab.cli: 命令行入口

约定：θ(uv, x) = θ(u, θ(v, x))，即字最右边的字母最先作用。
"""

__version__ = "0.1.0"
